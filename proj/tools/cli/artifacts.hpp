#pragma once

// File formats written by the command-line tool, each with a reader so that
// every artifact can be loaded back.

#include <cstdint>
#include <string>
#include <vector>

#include "stvmd/metrics.hpp"
#include "stvmd/types.hpp"

namespace stvmd::cli {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};

/// Heatmap of a T x B magnitude map: time runs left to right, frequency
/// bottom to top. Log-scaled to an 80 dB range below the image maximum.
GrayImage heatmap_from_magnitudes(const Tensor<double, 2>& map);

/// Plain (P2) 8-bit PGM.
void write_pgm(const std::string& path, const GrayImage& image);
GrayImage read_pgm(const std::string& path);

std::string report_to_json(const DecompositionReport& report, double sample_rate_hz);
DecompositionReport report_from_json(const std::string& text);

struct Table2 {
  std::vector<std::string> solvers;           // rows
  std::vector<std::string> signals;           // columns, without "average"
  std::vector<std::vector<double>> rmse;      // solvers x signals
  std::vector<double> average;                // per solver
};

void write_table2_csv(const std::string& path, const Table2& table);
Table2 read_table2_csv(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace stvmd::cli

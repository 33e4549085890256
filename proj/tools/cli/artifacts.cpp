#include "cli/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stvmd/error.hpp"

namespace stvmd::cli {

using nlohmann::json;

GrayImage heatmap_from_magnitudes(const Tensor<double, 2>& map) {
  const std::size_t frames = map.extent(0);
  const std::size_t bins = map.extent(1);
  GrayImage img{frames, bins, std::vector<std::uint8_t>(frames * bins, 0)};
  double peak = 0.0;
  for (double v : map.flat()) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) return img;
  constexpr double kFloorDb = -80.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t y = bins - 1 - b;
    for (std::size_t t = 0; t < frames; ++t) {
      const double mag = std::abs(map(t, b)) / peak;
      const double db = mag > 0.0 ? 20.0 * std::log10(mag) : kFloorDb;
      const double level = std::clamp((db - kFloorDb) / -kFloorDb, 0.0, 1.0);
      img.pixels[y * frames + t] = static_cast<std::uint8_t>(std::lround(level * 255.0));
    }
  }
  return img;
}

void write_pgm(const std::string& path, const GrayImage& image) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "P2\n" << image.width << ' ' << image.height << "\n255\n";
  for (std::size_t y = 0; y < image.height; ++y) {
    for (std::size_t x = 0; x < image.width; ++x) {
      if (x) out << ' ';
      out << static_cast<int>(image.pixels[y * image.width + x]);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string magic;
  GrayImage img;
  int maxval = 0;
  in >> magic >> img.width >> img.height >> maxval;
  if (magic != "P2" || maxval != 255 || !in) throw Error(ErrorCode::ParseError, path + ": not a plain 8-bit PGM");
  img.pixels.resize(img.width * img.height);
  for (auto& p : img.pixels) {
    int v = 0;
    if (!(in >> v) || v < 0 || v > 255) throw Error(ErrorCode::ParseError, path + ": truncated pixel data");
    p = static_cast<std::uint8_t>(v);
  }
  return img;
}

namespace {

json matrix_to_json(const Tensor<double, 2>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.extent(0); ++r) {
    const auto lane = m.lane(r);
    rows.push_back(std::vector<double>(lane.begin(), lane.end()));
  }
  return rows;
}

Tensor<double, 2> matrix_from_json(const json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.at(0).size() : 0;
  Tensor<double, 2> m({rows, cols});
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols) throw Error(ErrorCode::ParseError, "ragged matrix in report");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

std::string report_to_json(const DecompositionReport& report, double sample_rate_hz) {
  json j;
  j["solver"] = report.solver;
  j["sample_rate_hz"] = sample_rate_hz;
  j["rmse_overall"] = report.rmse_overall;
  j["rmse_per_channel"] = report.rmse_per_channel;
  j["freq_tracks_hz"] = matrix_to_json(report.freq_tracks);
  j["mode_power"] = matrix_to_json(report.mode_power);
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["last_change"] = report.last_change;
  j["warning"] = report.converged ? json(nullptr) : json("NotConverged");
  // nlohmann::json objects are key-sorted, so the layout is stable.
  return j.dump(2) + "\n";
}

DecompositionReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    DecompositionReport r;
    r.solver = j.at("solver").get<std::string>();
    r.rmse_overall = j.at("rmse_overall").get<double>();
    r.rmse_per_channel = j.at("rmse_per_channel").get<std::vector<double>>();
    r.freq_tracks = matrix_from_json(j.at("freq_tracks_hz"));
    r.mode_power = matrix_from_json(j.at("mode_power"));
    r.iterations = j.at("iterations").get<std::size_t>();
    r.converged = j.at("converged").get<bool>();
    r.last_change = j.at("last_change").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report.json: ") + e.what());
  }
}

void write_table2_csv(const std::string& path, const Table2& table) {
  std::ostringstream out;
  out << "solver";
  for (const auto& s : table.signals) out << ',' << s;
  out << ",average\n";
  for (std::size_t r = 0; r < table.solvers.size(); ++r) {
    out << table.solvers[r];
    for (double v : table.rmse[r]) out << ',' << format_number(v);
    out << ',' << format_number(table.average[r]) << '\n';
  }
  write_text_file(path, out.str());
}

Table2 read_table2_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  Table2 table;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) out.push_back(item);
    return out;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path + ": empty table");
  auto header = split(line);
  if (header.size() < 3 || header.front() != "solver" || header.back() != "average") {
    throw Error(ErrorCode::ParseError, path + ": bad header");
  }
  table.signals.assign(header.begin() + 1, header.end() - 1);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::ParseError, path + ": line " + std::to_string(line_no) + " has wrong width");
    }
    table.solvers.push_back(cells.front());
    std::vector<double> row;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v);
      if (ec != std::errc{}) throw Error(ErrorCode::ParseError, path + ": bad number '" + cells[i] + "'");
      row.push_back(v);
    }
    table.average.push_back(row.back());
    row.pop_back();
    table.rmse.push_back(std::move(row));
  }
  return table;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace stvmd::cli

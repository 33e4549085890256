#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stvmd/spectral.hpp"
#include "stvmd/types.hpp"

namespace stvmd {

struct RmseValues {
  std::vector<double> per_channel;
  double overall = 0.0;  // pooled over channels and samples
};

RmseValues rmse(const Tensor<double, 2>& reference, const Tensor<double, 2>& estimate);

/// Sum of every mode's time function, residual included. C x L.
Tensor<double, 2> recovered_signal(const ModeSet& modes);

/// RMSE between the input and the sum of all modes (ShapeMismatch if the
/// dimensions differ).
RmseValues reconstruction_rmse(const MultichannelSignal& original, const ModeSet& modes);

/// Central frequencies in Hz, K x T (dynamic) or K x 1 (static).
Tensor<double, 2> freq_track_hz(const FrequencyState& freqs, double fs);
Tensor<double, 2> freq_track_hz(const ModeSet& modes);

/// Per-channel magnitude of the windowed spectra, C x T x (N/2 + 1).
Tensor<double, 3> spectrogram(const MultichannelSignal& signal, std::size_t window_len,
                              std::size_t hop = 1, WindowKind kind = WindowKind::Hamming);

struct DecompositionReport {
  std::string solver;
  std::vector<double> rmse_per_channel;
  double rmse_overall = 0.0;
  Tensor<double, 2> freq_tracks;  // Hz
  Tensor<double, 2> mode_power;   // K x T
  std::size_t iterations = 0;
  bool converged = false;
  double last_change = 0.0;
};

DecompositionReport make_report(const std::string& solver, const MultichannelSignal& original,
                                const ModeSet& modes);

}  // namespace stvmd

#include "stvmd/metrics.hpp"

#include <cmath>

#include "stvmd/error.hpp"
#include "stvmd/stvmd.hpp"

namespace stvmd {

RmseValues rmse(const Tensor<double, 2>& reference, const Tensor<double, 2>& estimate) {
  if (reference.shape() != estimate.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "rmse operands differ in shape");
  }
  const std::size_t channels = reference.extent(0);
  const std::size_t len = reference.extent(1);
  RmseValues out;
  out.per_channel.resize(channels);
  double pooled = 0.0;
  for (std::size_t c = 0; c < channels; ++c) {
    const auto a = reference.lane(c);
    const auto b = estimate.lane(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    pooled += sum;
    out.per_channel[c] = std::sqrt(sum / static_cast<double>(len));
  }
  out.overall = std::sqrt(pooled / static_cast<double>(channels * len));
  return out;
}

Tensor<double, 2> recovered_signal(const ModeSet& modes) {
  Tensor<double, 2> out({modes.channels(), modes.length()});
  for (std::size_t k = 0; k < modes.num_modes(); ++k) {
    for (std::size_t c = 0; c < modes.channels(); ++c) {
      const auto src = modes.mode_time.lane(k, c);
      auto dst = out.lane(c);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
  return out;
}

RmseValues reconstruction_rmse(const MultichannelSignal& original, const ModeSet& modes) {
  if (original.channels() != modes.channels() || original.length() != modes.length()) {
    throw Error(ErrorCode::ShapeMismatch, "mode set does not match the signal dimensions");
  }
  return rmse(original.samples(), recovered_signal(modes));
}

Tensor<double, 2> freq_track_hz(const FrequencyState& freqs, double fs) {
  Tensor<double, 2> out = freqs.values();
  for (double& v : out.flat()) v *= fs;
  return out;
}

Tensor<double, 2> freq_track_hz(const ModeSet& modes) {
  return freq_track_hz(modes.freqs, modes.sample_rate_hz);
}

Tensor<double, 3> spectrogram(const MultichannelSignal& signal, std::size_t window_len,
                              std::size_t hop, WindowKind kind) {
  const WindowVector window = make_window(kind, window_len);
  const WindowedSpectra spectra = forward_spectra(frame_signal(signal, window, hop));
  Tensor<double, 3> out({spectra.channels(), spectra.num_frames(), spectra.num_bins()});
  auto dst = out.flat();
  const auto src = spectra.spectra.flat();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::abs(src[i]);
  return out;
}

DecompositionReport make_report(const std::string& solver, const MultichannelSignal& original,
                                const ModeSet& modes) {
  DecompositionReport report;
  report.solver = solver;
  const RmseValues err = reconstruction_rmse(original, modes);
  report.rmse_per_channel = err.per_channel;
  report.rmse_overall = err.overall;
  report.freq_tracks = freq_track_hz(modes);
  report.mode_power = Tensor<double, 2>({modes.num_modes(), modes.num_windows()});
  for (std::size_t k = 0; k < modes.num_modes(); ++k) {
    const auto power = mode_bandwidth_power(modes, k);
    std::copy(power.begin(), power.end(), report.mode_power.lane(k).begin());
  }
  report.iterations = modes.stats.iterations;
  report.converged = modes.stats.converged;
  report.last_change = modes.stats.last_change;
  return report;
}

}  // namespace stvmd

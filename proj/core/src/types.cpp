#include "stvmd/types.hpp"

#include <algorithm>
#include <cmath>

#include "stvmd/error.hpp"

namespace stvmd {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadWindow: return "BadWindow";
    case ErrorCode::WindowTooLong: return "WindowTooLong";
    case ErrorCode::BadModeCount: return "BadModeCount";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::CustomLengthMismatch: return "CustomLengthMismatch";
    case ErrorCode::PadTooLarge: return "PadTooLarge";
    case ErrorCode::ZeroWindowSum: return "ZeroWindowSum";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RaggedEpochs: return "RaggedEpochs";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::UnknownSignal: return "UnknownSignal";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

MultichannelSignal::MultichannelSignal(Tensor<double, 2> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (samples_.extent(0) == 0) {
    throw Error(ErrorCode::ShapeMismatch, "signal needs at least one channel");
  }
  if (samples_.extent(1) < 2) {
    throw Error(ErrorCode::ShapeMismatch, "signal needs at least two samples");
  }
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw Error(ErrorCode::BadConfig, "sample rate must be positive");
  }
}

static Tensor<double, 2> stack_channels(const std::vector<std::vector<double>>& channels) {
  if (channels.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "signal needs at least one channel");
  }
  const std::size_t len = channels.front().size();
  Tensor<double, 2> out({channels.size(), len});
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (channels[c].size() != len) {
      throw Error(ErrorCode::ShapeMismatch, "channels differ in length");
    }
    std::copy(channels[c].begin(), channels[c].end(), out.lane(c).begin());
  }
  return out;
}

MultichannelSignal::MultichannelSignal(const std::vector<std::vector<double>>& channels,
                                       double sample_rate_hz)
    : MultichannelSignal(stack_channels(channels), sample_rate_hz) {}

bool MultichannelSignal::all_finite() const noexcept {
  const auto flat = samples_.flat();
  return std::all_of(flat.begin(), flat.end(), [](double v) { return std::isfinite(v); });
}

std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::Hamming: return "hamming";
    case WindowKind::Hann: return "hann";
    case WindowKind::Rectangular: return "rect";
  }
  return "hamming";
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::UniformHalfBand: return "uniform";
    case InitKind::Zero: return "zero";
    case InitKind::Custom: return "custom";
  }
  return "uniform";
}

WindowKind parse_window_kind(const std::string& text) {
  if (text == "hamming") return WindowKind::Hamming;
  if (text == "hann" || text == "hanning") return WindowKind::Hann;
  if (text == "rect" || text == "rectangular") return WindowKind::Rectangular;
  throw Error(ErrorCode::BadConfig, "unknown window kind '" + text + "'");
}

InitKind parse_init_kind(const std::string& text) {
  if (text == "uniform") return InitKind::UniformHalfBand;
  if (text == "zero") return InitKind::Zero;
  if (text == "custom") return InitKind::Custom;
  throw Error(ErrorCode::BadConfig, "unknown init scheme '" + text + "'");
}

FrequencyState FrequencyState::make_static(std::vector<double> freqs) {
  FrequencyState s;
  const std::size_t k = freqs.size();
  s.values_ = Tensor<double, 2>({k, 1}, std::move(freqs));
  return s;
}

FrequencyState FrequencyState::make_dynamic(Tensor<double, 2> omega) {
  FrequencyState s;
  s.dynamic_ = true;
  s.values_ = std::move(omega);
  return s;
}

FrequencyState FrequencyState::replicate(std::span<const double> freqs, std::size_t num_windows) {
  Tensor<double, 2> omega({freqs.size(), num_windows});
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    auto row = omega.lane(k);
    std::fill(row.begin(), row.end(), freqs[k]);
  }
  return make_dynamic(std::move(omega));
}

std::vector<double> FrequencyState::column(std::size_t window) const {
  std::vector<double> out(num_modes());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k, window);
  return out;
}

}  // namespace stvmd

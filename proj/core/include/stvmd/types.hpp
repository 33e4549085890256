#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stvmd/tensor.hpp"

namespace stvmd {

using Complex = std::complex<double>;

/// C real-valued channels of equal length L sampled at a common rate.
///
/// Samples are stored channel-major. Construction enforces the shape
/// invariants (L >= 2, equal lengths, positive rate); finiteness is checked
/// by validate_config so that a bad recording is reported as NonFinite at
/// the point where it would poison a solver.
class MultichannelSignal {
 public:
  MultichannelSignal() = default;
  MultichannelSignal(Tensor<double, 2> samples, double sample_rate_hz);
  MultichannelSignal(const std::vector<std::vector<double>>& channels, double sample_rate_hz);

  std::size_t channels() const noexcept { return samples_.extent(0); }
  std::size_t length() const noexcept { return samples_.extent(1); }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }

  std::span<const double> channel(std::size_t c) const noexcept { return samples_.lane(c); }
  std::span<double> channel(std::size_t c) noexcept { return samples_.lane(c); }
  double operator()(std::size_t c, std::size_t n) const noexcept { return samples_(c, n); }

  const Tensor<double, 2>& samples() const noexcept { return samples_; }
  bool all_finite() const noexcept;

 private:
  Tensor<double, 2> samples_;
  double sample_rate_hz_ = 1.0;
};

enum class WindowKind { Hamming, Hann, Rectangular };
enum class InitKind { UniformHalfBand, Zero, Custom };

std::string to_string(WindowKind kind);
std::string to_string(InitKind kind);
WindowKind parse_window_kind(const std::string& text);
InitKind parse_init_kind(const std::string& text);

/// Solver parameters. Defaults follow the usual VMD setting: alpha 50,
/// tolerance 1e-9, Hamming window, uniform half-band initialization.
struct DecompositionConfig {
  std::size_t num_modes = 3;
  double alpha = 50.0;
  std::size_t window_len = 64;
  WindowKind window_kind = WindowKind::Hamming;
  std::size_t hop = 1;
  double dual_step = 0.0;
  double tolerance = 1e-9;
  std::size_t max_iters = 500;
  InitKind init = InitKind::UniformHalfBand;
  std::vector<double> custom_freqs;  // normalized, used when init == Custom

  bool operator==(const DecompositionConfig&) const = default;
};

/// A config that passed validation against a particular signal.
struct CheckedConfig {
  DecompositionConfig config;
  std::size_t signal_length = 0;
  std::size_t channels = 0;
  std::size_t num_bins = 0;       // window_len / 2 + 1
  std::size_t padded_length = 0;  // signal_length + window_len
  std::size_t num_windows = 0;    // ceil(signal_length / hop)
};

/// Central frequencies in cycles/sample, either one per mode (static) or one
/// per (mode, window) (dynamic). Row 0 is the residual and stays at zero.
class FrequencyState {
 public:
  FrequencyState() = default;

  static FrequencyState make_static(std::vector<double> freqs);
  static FrequencyState make_dynamic(Tensor<double, 2> omega);
  static FrequencyState replicate(std::span<const double> freqs, std::size_t num_windows);

  bool is_dynamic() const noexcept { return dynamic_; }
  std::size_t num_modes() const noexcept { return values_.extent(0); }
  // Number of stored columns: 1 for static, T for dynamic.
  std::size_t num_columns() const noexcept { return values_.extent(1); }

  // Static states ignore the window index.
  double at(std::size_t k, std::size_t window) const noexcept {
    return values_(k, dynamic_ ? window : 0);
  }
  double& slot(std::size_t k, std::size_t column) noexcept { return values_(k, column); }
  std::span<const double> row(std::size_t k) const noexcept { return values_.lane(k); }
  std::vector<double> column(std::size_t window) const;

  const Tensor<double, 2>& values() const noexcept { return values_; }

  bool operator==(const FrequencyState&) const = default;

 private:
  bool dynamic_ = false;
  Tensor<double, 2> values_;
};

inline constexpr std::size_t kResidualIndex = 0;

/// Convergence bookkeeping shared by all solvers.
struct SolveStats {
  std::size_t iterations = 0;
  bool converged = false;
  double last_change = 0.0;
  std::size_t zero_energy_events = 0;
};

/// K modes over C channels. mode_spectra holds the half spectra the solver
/// worked on (T = 1 and transform_len = L for whole-signal VMD); mode_time
/// holds the reconstructed time-domain mode functions.
struct ModeSet {
  Tensor<Complex, 4> mode_spectra;  // K x C x T x bins
  Tensor<double, 3> mode_time;      // K x C x L
  FrequencyState freqs;
  std::size_t residual_index = kResidualIndex;
  std::size_t transform_len = 0;
  std::size_t hop = 1;
  double sample_rate_hz = 1.0;
  SolveStats stats;

  std::size_t num_modes() const noexcept { return mode_time.extent(0); }
  std::size_t channels() const noexcept { return mode_time.extent(1); }
  std::size_t length() const noexcept { return mode_time.extent(2); }
  std::size_t num_windows() const noexcept { return mode_spectra.extent(2); }
  std::size_t num_bins() const noexcept { return mode_spectra.extent(3); }
  double bin_freq(std::size_t m) const noexcept {
    return static_cast<double>(m) / static_cast<double>(transform_len);
  }
};

}  // namespace stvmd

#include "stvmd/vmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stvmd/config.hpp"
#include "stvmd/error.hpp"
#include "stvmd/fft.hpp"

namespace stvmd {

double ChangeAccumulator::quotient() const noexcept {
  if (prev > 0.0) return diff / prev;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

Tensor<Complex, 2> whole_signal_spectra(const MultichannelSignal& signal) {
  const RealFft fft(signal.length());
  Tensor<Complex, 2> out({signal.channels(), fft.bins()});
  for (std::size_t c = 0; c < signal.channels(); ++c) fft.forward(signal.channel(c), out.lane(c));
  return out;
}

VmdState make_vmd_state(const Tensor<Complex, 2>& input, std::size_t transform_len,
                        const std::vector<double>& init_freqs) {
  VmdState s;
  const std::size_t channels = input.extent(0);
  const std::size_t bins = input.extent(1);
  s.mode_spectra = Tensor<Complex, 3>({init_freqs.size(), channels, bins});
  s.multipliers = Tensor<Complex, 2>({channels, bins});
  s.freqs = init_freqs;
  s.freqs[kResidualIndex] = 0.0;
  s.transform_len = transform_len;
  return s;
}

ChangeAccumulator vmd_mode_update(VmdState& state, const Tensor<Complex, 2>& input, std::size_t k,
                                  std::size_t c, double alpha) {
  const std::size_t modes = state.num_modes();
  const auto x = input.lane(c);
  const auto lambda = state.multipliers.lane(c);
  auto u = state.mode_spectra.lane(k, c);
  const double omega = state.freqs[k];
  ChangeAccumulator acc;
  for (std::size_t m = 0; m < u.size(); ++m) {
    Complex rest{0.0, 0.0};
    for (std::size_t i = 0; i < modes; ++i) {
      if (i != k) rest += state.mode_spectra(i, c, m);
    }
    const double d = state.bin_freq(m) - omega;
    const Complex next = (x[m] - rest + 0.5 * lambda[m]) / (1.0 + 2.0 * alpha * d * d);
    acc.diff += std::norm(next - u[m]);
    acc.prev += std::norm(u[m]);
    u[m] = next;
  }
  return acc;
}

bool vmd_freq_update(VmdState& state, std::size_t k) {
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t c = 0; c < state.channels(); ++c) {
    const auto u = state.mode_spectra.lane(k, c);
    for (std::size_t m = 0; m < u.size(); ++m) {
      const double p = std::norm(u[m]);
      weighted += state.bin_freq(m) * p;
      total += p;
    }
  }
  if (!(total > 0.0)) return false;
  state.freqs[k] = weighted / total;
  return true;
}

void vmd_multiplier_update(VmdState& state, const Tensor<Complex, 2>& input, std::size_t c,
                           double dual_step) {
  if (dual_step == 0.0) return;
  const auto x = input.lane(c);
  auto lambda = state.multipliers.lane(c);
  for (std::size_t m = 0; m < lambda.size(); ++m) {
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < state.num_modes(); ++k) sum += state.mode_spectra(k, c, m);
    lambda[m] += dual_step * (x[m] - sum);
  }
}

VmdState vmd_solve(const Tensor<Complex, 2>& input, std::size_t transform_len,
                   const DecompositionConfig& config, const SolverOptions& options) {
  VmdState state = make_vmd_state(input, transform_len, init_frequencies(config).column(0));

  const std::size_t modes = state.num_modes();
  const std::size_t channels = state.channels();
  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    double change = 0.0;
    for (std::size_t k = 0; k < modes; ++k) {
      for (std::size_t c = 0; c < channels; ++c) {
        change = std::max(change, vmd_mode_update(state, input, k, c, config.alpha).quotient());
      }
    }
    for (std::size_t k = 0; k < modes; ++k) {
      if (k == kResidualIndex) continue;
      if (!vmd_freq_update(state, k)) ++state.stats.zero_energy_events;
    }
    for (std::size_t c = 0; c < channels; ++c) {
      vmd_multiplier_update(state, input, c, config.dual_step);
    }
    state.stats.iterations = iter;
    state.stats.last_change = change;
    if (options.observer) {
      const FrequencyState snapshot = FrequencyState::make_static(state.freqs);
      options.observer({iter, snapshot, change});
    }
    if (change < config.tolerance) {
      state.stats.converged = true;
      break;
    }
  }
  return state;
}

ModeSet vmd_decompose(const MultichannelSignal& signal, const DecompositionConfig& config,
                      const SolverOptions& options) {
  validate_config_fields(config);
  if (!signal.all_finite()) throw Error(ErrorCode::NonFinite, "signal contains NaN or Inf");

  const std::size_t len = signal.length();
  const Tensor<Complex, 2> input = whole_signal_spectra(signal);
  VmdState state = vmd_solve(input, len, config, options);

  const std::size_t modes = state.num_modes();
  const std::size_t channels = state.channels();
  const std::size_t bins = state.num_bins();
  ModeSet out;
  out.mode_spectra = Tensor<Complex, 4>({modes, channels, 1, bins});
  out.mode_time = Tensor<double, 3>({modes, channels, len});
  const RealFft fft(len);
  for (std::size_t k = 0; k < modes; ++k) {
    for (std::size_t c = 0; c < channels; ++c) {
      const auto u = state.mode_spectra.lane(k, c);
      std::copy(u.begin(), u.end(), out.mode_spectra.lane(k, c, 0).begin());
      fft.inverse(u, out.mode_time.lane(k, c));
    }
  }
  out.freqs = FrequencyState::make_static(state.freqs);
  out.transform_len = len;
  out.hop = 1;
  out.sample_rate_hz = signal.sample_rate_hz();
  out.stats = state.stats;
  return out;
}

}  // namespace stvmd

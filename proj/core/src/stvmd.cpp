#include "stvmd/stvmd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stvmd/config.hpp"
#include "stvmd/error.hpp"

namespace stvmd {

StvmdState make_stvmd_state(const WindowedSpectra& input, FrequencyState init) {
  const std::size_t modes = init.num_modes();
  if (init.is_dynamic() && init.num_columns() != input.num_frames()) {
    throw Error(ErrorCode::ShapeMismatch, "dynamic initialization has " +
                                              std::to_string(init.num_columns()) + " columns for " +
                                              std::to_string(input.num_frames()) + " windows");
  }
  StvmdState s;
  s.mode_spectra =
      Tensor<Complex, 4>({modes, input.channels(), input.num_frames(), input.num_bins()});
  s.multipliers = Tensor<Complex, 3>({input.channels(), input.num_frames(), input.num_bins()});
  s.freqs = std::move(init);
  for (std::size_t col = 0; col < s.freqs.num_columns(); ++col) s.freqs.slot(kResidualIndex, col) = 0.0;
  s.transform_len = input.transform_len();
  return s;
}

ChangeAccumulator stvmd_mode_update(StvmdState& state, const WindowedSpectra& input, std::size_t k,
                                    std::size_t c, std::size_t t, double omega_eff, double alpha) {
  const std::size_t modes = state.num_modes();
  const auto x = input.spectra.lane(c, t);
  const auto lambda = state.multipliers.lane(c, t);
  auto u = state.mode_spectra.lane(k, c, t);
  ChangeAccumulator acc;
  for (std::size_t m = 0; m < u.size(); ++m) {
    Complex rest{0.0, 0.0};
    for (std::size_t i = 0; i < modes; ++i) {
      if (i != k) rest += state.mode_spectra(i, c, t, m);
    }
    const double d = state.bin_freq(m) - omega_eff;
    const Complex next = (x[m] - rest + 0.5 * lambda[m]) / (1.0 + 2.0 * alpha * d * d);
    acc.diff += std::norm(next - u[m]);
    acc.prev += std::norm(u[m]);
    u[m] = next;
  }
  return acc;
}

namespace {

// Accumulates sum f_m |u|^2 and sum |u|^2 for mode k, window t, all channels.
void window_moments(const StvmdState& state, std::size_t k, std::size_t t, double& weighted,
                    double& total) {
  for (std::size_t c = 0; c < state.channels(); ++c) {
    const auto u = state.mode_spectra.lane(k, c, t);
    for (std::size_t m = 0; m < u.size(); ++m) {
      const double p = std::norm(u[m]);
      weighted += state.bin_freq(m) * p;
      total += p;
    }
  }
}

}  // namespace

bool stvmd_freq_update_static(StvmdState& state, std::size_t k) {
  double weighted = 0.0;
  double total = 0.0;
  // Windows outer, channels inner: one fixed reduction order.
  for (std::size_t t = 0; t < state.num_windows(); ++t) window_moments(state, k, t, weighted, total);
  if (!(total > 0.0)) return false;
  state.freqs.slot(k, 0) = weighted / total;
  return true;
}

bool stvmd_freq_update_dynamic(StvmdState& state, std::size_t k, std::size_t t) {
  double weighted = 0.0;
  double total = 0.0;
  window_moments(state, k, t, weighted, total);
  if (!(total > 0.0)) return false;
  state.freqs.slot(k, t) = weighted / total;
  return true;
}

void stvmd_multiplier_update(StvmdState& state, const WindowedSpectra& input, std::size_t c,
                             std::size_t t, double dual_step) {
  if (dual_step == 0.0) return;
  const auto x = input.spectra.lane(c, t);
  auto lambda = state.multipliers.lane(c, t);
  for (std::size_t m = 0; m < lambda.size(); ++m) {
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < state.num_modes(); ++k) sum += state.mode_spectra(k, c, t, m);
    lambda[m] += dual_step * (x[m] - sum);
  }
}

double stvmd_sweep(StvmdState& state, const WindowedSpectra& input, const DecompositionConfig& config) {
  const std::size_t modes = state.num_modes();
  const std::size_t channels = state.channels();
  const std::size_t windows = state.num_windows();
  double change = 0.0;
  for (std::size_t k = 0; k < modes; ++k) {
    for (std::size_t c = 0; c < channels; ++c) {
      ChangeAccumulator acc;
      for (std::size_t t = 0; t < windows; ++t) {
        const ChangeAccumulator lane =
            stvmd_mode_update(state, input, k, c, t, state.freqs.at(k, t), config.alpha);
        acc.diff += lane.diff;
        acc.prev += lane.prev;
      }
      change = std::max(change, acc.quotient());
    }
  }
  for (std::size_t k = 0; k < modes; ++k) {
    if (k == kResidualIndex) continue;
    if (state.freqs.is_dynamic()) {
      for (std::size_t t = 0; t < windows; ++t) {
        if (!stvmd_freq_update_dynamic(state, k, t)) ++state.stats.zero_energy_events;
      }
    } else if (!stvmd_freq_update_static(state, k)) {
      ++state.stats.zero_energy_events;
    }
  }
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t t = 0; t < windows; ++t) {
      stvmd_multiplier_update(state, input, c, t, config.dual_step);
    }
  }
  return change;
}

StvmdState stvmd_solve(const WindowedSpectra& input, const DecompositionConfig& config,
                       StvmdVariant variant, const SolverOptions& options,
                       std::optional<FrequencyState> init) {
  const bool dynamic = variant == StvmdVariant::Dynamic;
  FrequencyState start = init ? std::move(*init)
                              : init_frequencies(config, dynamic ? input.num_frames() : 0);
  if (start.is_dynamic() != dynamic) {
    throw Error(ErrorCode::ShapeMismatch, "initial frequency state does not match the variant");
  }
  if (start.num_modes() != config.num_modes) {
    throw Error(ErrorCode::CustomLengthMismatch, "initial frequency state has the wrong mode count");
  }
  StvmdState state = make_stvmd_state(input, std::move(start));
  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    const double change = stvmd_sweep(state, input, config);
    state.stats.iterations = iter;
    state.stats.last_change = change;
    if (options.observer) options.observer({iter, state.freqs, change});
    if (change < config.tolerance) {
      state.stats.converged = true;
      break;
    }
  }
  return state;
}

Tensor<double, 3> reconstruct_modes(const StvmdState& state, const FrameLayout& layout,
                                    const WindowVector& window, std::size_t first, std::size_t count) {
  const std::size_t modes = state.num_modes();
  const std::size_t channels = state.channels();
  Tensor<double, 3> out({modes, channels, count});
  WindowedSpectra single{Tensor<Complex, 3>({channels, state.num_windows(), state.num_bins()}), layout};
  for (std::size_t k = 0; k < modes; ++k) {
    for (std::size_t c = 0; c < channels; ++c) {
      for (std::size_t t = 0; t < state.num_windows(); ++t) {
        const auto src = state.mode_spectra.lane(k, c, t);
        std::copy(src.begin(), src.end(), single.spectra.lane(c, t).begin());
      }
    }
    const Tensor<double, 2> recovered =
        overlap_add_recover(inverse_spectra(single), window, first, count);
    for (std::size_t c = 0; c < channels; ++c) {
      const auto src = recovered.lane(c);
      std::copy(src.begin(), src.end(), out.lane(k, c).begin());
    }
  }
  return out;
}

ModeSet stvmd_decompose(const MultichannelSignal& signal, const DecompositionConfig& config,
                        StvmdVariant variant, const SolverOptions& options) {
  const CheckedConfig checked = validate_config(config, signal);
  const WindowVector window = make_window(config.window_kind, config.window_len);
  const WindowedSpectra input = forward_spectra(frame_signal(signal, window, config.hop));
  StvmdState state = stvmd_solve(input, config, variant, options);

  ModeSet out;
  out.mode_time = reconstruct_modes(state, input.layout, window, 0, checked.signal_length);
  out.mode_spectra = std::move(state.mode_spectra);
  out.freqs = std::move(state.freqs);
  out.transform_len = config.window_len;
  out.hop = config.hop;
  out.sample_rate_hz = signal.sample_rate_hz();
  out.stats = state.stats;
  return out;
}

std::vector<double> mode_bandwidth_power(const ModeSet& modes, std::size_t k) {
  std::vector<double> out(modes.num_windows(), 0.0);
  for (std::size_t t = 0; t < modes.num_windows(); ++t) {
    const double omega = modes.freqs.at(k, t);
    double sum = 0.0;
    for (std::size_t c = 0; c < modes.channels(); ++c) {
      const auto u = modes.mode_spectra.lane(k, c, t);
      for (std::size_t m = 0; m < u.size(); ++m) {
        const double d = 2.0 * std::numbers::pi * (modes.bin_freq(m) - omega);
        sum += d * d * std::norm(u[m]);
      }
    }
    out[t] = sum;
  }
  return out;
}

FrequencyState smooth_frequency_tracks(const FrequencyState& freqs, std::size_t width) {
  if (!freqs.is_dynamic() || width <= 1) return freqs;
  if (width % 2 == 0) throw Error(ErrorCode::BadConfig, "median width must be odd");
  const std::size_t cols = freqs.num_columns();
  const std::size_t half = width / 2;
  Tensor<double, 2> out = freqs.values();
  std::vector<double> buf;
  for (std::size_t k = 0; k < freqs.num_modes(); ++k) {
    if (k == kResidualIndex) continue;
    const auto row = freqs.row(k);
    for (std::size_t t = 0; t < cols; ++t) {
      const std::size_t lo = t >= half ? t - half : 0;
      const std::size_t hi = std::min(cols, t + half + 1);
      buf.assign(row.begin() + static_cast<std::ptrdiff_t>(lo), row.begin() + static_cast<std::ptrdiff_t>(hi));
      auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
      std::nth_element(buf.begin(), mid, buf.end());
      out(k, t) = *mid;
    }
  }
  return FrequencyState::make_dynamic(std::move(out));
}

}  // namespace stvmd

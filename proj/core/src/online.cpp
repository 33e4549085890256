#include "stvmd/online.hpp"

#include <algorithm>
#include <cmath>

#include "stvmd/config.hpp"
#include "stvmd/error.hpp"
#include "stvmd/stvmd.hpp"

namespace stvmd {

OnlineState online_init(const DecompositionConfig& config, const OnlineOptions& options) {
  validate_config_fields(config);
  // Larger strides would drop unemitted samples off the cache or leave them
  // without a frame.
  if (options.stride < 1 || options.stride > config.window_len / 2 + 1) {
    throw Error(ErrorCode::BadConfig, "stride must lie in [1, N/2 + 1]");
  }
  OnlineState state;
  state.config = config;
  state.options = options;
  state.window = make_window(config.window_kind, config.window_len);
  state.warm_freqs = init_frequencies(config).column(0);
  return state;
}

namespace {

// Decomposes the whole cache and emits outputs for block positions
// [first_pos, width). Positions without a frame (left half-window of the
// block) are skipped.
std::vector<OnlineOutput> decompose_cache(OnlineState& state, std::size_t first_pos) {
  const std::size_t width = state.cache_width();
  const std::size_t n = state.config.window_len;
  std::vector<OnlineOutput> outputs;
  if (width <= n / 2) return outputs;
  const std::size_t first_frame_pos = n / 2 - 1;
  first_pos = std::max(first_pos, first_frame_pos);
  if (first_pos >= width) return outputs;

  const MultichannelSignal block(state.cache, 1.0);
  const WindowedSpectra input = forward_spectra(frame_block_causal(block, state.window));
  const std::size_t windows = input.num_frames();
  FrequencyState init = state.options.warm_start
                            ? FrequencyState::replicate(state.warm_freqs, windows)
                            : init_frequencies(state.config, windows);
  const StvmdState solved =
      stvmd_solve(input, state.config, StvmdVariant::Dynamic, {}, std::move(init));
  const Tensor<double, 3> values =
      reconstruct_modes(solved, input.layout, state.window, first_pos, width - first_pos);

  const std::size_t modes = solved.num_modes();
  for (std::size_t pos = first_pos; pos < width; ++pos) {
    const std::size_t t = pos - first_frame_pos;
    OnlineOutput out;
    out.index = state.cache_start + pos;
    out.warmup = false;
    out.freqs = solved.freqs.column(t);
    out.mode_values = Tensor<double, 2>({modes, state.channels});
    out.window_power.assign(modes, 0.0);
    for (std::size_t k = 0; k < modes; ++k) {
      for (std::size_t c = 0; c < state.channels; ++c) {
        out.mode_values(k, c) = values(k, c, pos - first_pos);
        for (const Complex& v : solved.mode_spectra.lane(k, c, t)) out.window_power[k] += std::norm(v);
      }
    }
    out.stats = solved.stats;
    outputs.push_back(std::move(out));
  }
  state.warm_freqs = solved.freqs.column(windows - 1);
  state.emitted_count += outputs.size();
  state.decomposed_once = true;
  return outputs;
}

}  // namespace

std::vector<OnlineOutput> online_push(OnlineState& state, std::span<const double> sample) {
  if (state.channels == 0) {
    if (sample.empty()) throw Error(ErrorCode::ShapeMismatch, "sample has no channels");
    state.channels = sample.size();
    state.cache.assign(state.channels, {});
  } else if (sample.size() != state.channels) {
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(state.channels) +
                                              " channels, got " + std::to_string(sample.size()));
  }
  if (!std::all_of(sample.begin(), sample.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::NonFinite, "non-finite sample at index " + std::to_string(state.next_index));
  }
  for (std::size_t c = 0; c < state.channels; ++c) state.cache[c].push_back(sample[c]);
  ++state.next_index;
  state.flushed = false;

  const std::size_t n = state.config.window_len;
  if (state.cache_width() < n) {
    OnlineOutput out;
    out.index = state.next_index - 1;
    out.warmup = true;
    out.freqs = state.warm_freqs;
    out.window_power.assign(state.config.num_modes, 0.0);
    return {out};
  }

  ++state.backlog;
  std::vector<OnlineOutput> outputs;
  if (state.backlog >= state.options.stride) {
    outputs = decompose_cache(state, n - state.backlog);
    state.backlog = 0;
  }
  for (auto& row : state.cache) row.erase(row.begin());
  ++state.cache_start;
  return outputs;
}

std::vector<OnlineOutput> online_flush(OnlineState& state) {
  if (state.flushed || state.cache_width() == 0) {
    state.flushed = true;
    return {};
  }
  std::vector<OnlineOutput> outputs;
  const std::size_t width = state.cache_width();
  if (state.backlog > 0) {
    // The newest `backlog` samples sit at the end of the (already trimmed) cache.
    outputs = decompose_cache(state, width - state.backlog);
  } else if (!state.decomposed_once) {
    outputs = decompose_cache(state, 0);
  }
  state.backlog = 0;
  state.flushed = true;
  return outputs;
}

}  // namespace stvmd

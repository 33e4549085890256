#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stvmd/spectral.hpp"
#include "stvmd/types.hpp"

namespace stvmd {

struct OnlineOptions {
  // Seed each block with the previous block's newest frequency column.
  // Off means every block starts from the configured initialization.
  bool warm_start = true;
  // Decompose every `stride` samples; the skipped samples are emitted in
  // a batch at the next decomposition.
  std::size_t stride = 1;
};

struct OnlineOutput {
  std::size_t index = 0;
  bool warmup = true;
  std::vector<double> freqs;        // K, cycles/sample
  Tensor<double, 2> mode_values;    // K x C; empty during warmup
  std::vector<double> window_power; // K, spectral energy of the sample's window
  SolveStats stats;
};

/// Streaming dynamic STVMD over the latest N samples. Memory stays
/// O(C * N + K) regardless of stream length.
struct OnlineState {
  DecompositionConfig config;
  OnlineOptions options;
  WindowVector window;
  std::size_t channels = 0;                 // fixed by the first push
  std::vector<std::vector<double>> cache;   // per channel, oldest first
  std::size_t cache_start = 0;              // stream index of cache[c][0]
  std::vector<double> warm_freqs;           // K
  std::size_t emitted_count = 0;            // outputs with warmup == false
  std::size_t next_index = 0;               // stream index of the next push
  std::size_t backlog = 0;                  // post-warmup samples not yet emitted
  bool decomposed_once = false;
  bool flushed = false;

  std::size_t cache_width() const noexcept { return cache.empty() ? 0 : cache.front().size(); }
  bool warmed_up() const noexcept { return cache_width() + 1 >= config.window_len; }
};

OnlineState online_init(const DecompositionConfig& config, const OnlineOptions& options = {});

/// Appends one sample per channel. Returns a warmup output while fewer than
/// N samples are available; afterwards decomposes the latest N samples
/// (right reflection only) on every stride-th push and returns outputs for
/// the samples not emitted yet.
std::vector<OnlineOutput> online_push(OnlineState& state, std::span<const double> sample);

/// Decomposes the cached partial block for any samples that never received
/// a decomposed output. A second call returns nothing.
std::vector<OnlineOutput> online_flush(OnlineState& state);

}  // namespace stvmd

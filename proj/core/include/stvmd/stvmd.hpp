#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stvmd/solver.hpp"
#include "stvmd/spectral.hpp"
#include "stvmd/types.hpp"

namespace stvmd {

enum class StvmdVariant {
  NonDynamic,  // one frequency per mode, shared by all windows
  Dynamic,     // one frequency per (mode, window)
};

/// ADMM state over windowed spectra. All channels of a window share the
/// same frequency slot, whichever variant is used.
struct StvmdState {
  Tensor<Complex, 4> mode_spectra;  // K x C x T x bins
  FrequencyState freqs;             // K x 1 or K x T
  Tensor<Complex, 3> multipliers;   // C x T x bins
  std::size_t transform_len = 0;
  SolveStats stats;

  std::size_t num_modes() const noexcept { return mode_spectra.extent(0); }
  std::size_t channels() const noexcept { return mode_spectra.extent(1); }
  std::size_t num_windows() const noexcept { return mode_spectra.extent(2); }
  std::size_t num_bins() const noexcept { return mode_spectra.extent(3); }
  double bin_freq(std::size_t m) const noexcept {
    return static_cast<double>(m) / static_cast<double>(transform_len);
  }
};

StvmdState make_stvmd_state(const WindowedSpectra& input, FrequencyState init);

/// Update of mode k for channel c in window t around omega_eff, in place.
/// Returns the change contribution of this lane.
ChangeAccumulator stvmd_mode_update(StvmdState& state, const WindowedSpectra& input, std::size_t k,
                                    std::size_t c, std::size_t t, double omega_eff, double alpha);

/// Centroid pooled over channels, windows and bins. False on an empty mode.
bool stvmd_freq_update_static(StvmdState& state, std::size_t k);

/// Centroid of window t pooled over channels. False on an empty window.
bool stvmd_freq_update_dynamic(StvmdState& state, std::size_t k, std::size_t t);

void stvmd_multiplier_update(StvmdState& state, const WindowedSpectra& input, std::size_t c,
                             std::size_t t, double dual_step);

/// One complete sweep (modes, then frequencies, then multipliers). Returns
/// the largest per-(k, c) change quotient, pooled over windows and bins.
double stvmd_sweep(StvmdState& state, const WindowedSpectra& input, const DecompositionConfig& config);

/// Iterates sweeps from `init` (or the configured initialization) until the
/// change drops below the tolerance or max_iters is hit.
StvmdState stvmd_solve(const WindowedSpectra& input, const DecompositionConfig& config,
                       StvmdVariant variant, const SolverOptions& options = {},
                       std::optional<FrequencyState> init = std::nullopt);

/// Time-domain modes for samples [first, first + count) via Hermitian
/// inversion and overlap-add with the analysis window. K x C x count.
Tensor<double, 3> reconstruct_modes(const StvmdState& state, const FrameLayout& layout,
                                    const WindowVector& window, std::size_t first, std::size_t count);

/// Frames the signal, solves, and reconstructs every mode over the full
/// signal length.
ModeSet stvmd_decompose(const MultichannelSignal& signal, const DecompositionConfig& config,
                        StvmdVariant variant, const SolverOptions& options = {});

/// Per-window bandwidth penalty of mode k:
///   sum_c sum_m (2 pi (f_m - omega_eff))^2 |u_k,c,t[m]|^2
std::vector<double> mode_bandwidth_power(const ModeSet& modes, std::size_t k);

/// Optional post-hoc diagnostic, not part of the solver: moving median of
/// width `width` (odd) over each row of a dynamic frequency state. Static
/// states are returned unchanged.
FrequencyState smooth_frequency_tracks(const FrequencyState& freqs, std::size_t width);

}  // namespace stvmd

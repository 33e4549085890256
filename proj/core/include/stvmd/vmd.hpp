#pragma once

#include <cstddef>
#include <vector>

#include "stvmd/solver.hpp"
#include "stvmd/types.hpp"

namespace stvmd {

/// ADMM state for (M)VMD over the whole-signal half spectrum.
/// One central frequency per mode is shared by every channel.
struct VmdState {
  Tensor<Complex, 3> mode_spectra;  // K x C x (L/2 + 1)
  std::vector<double> freqs;        // K, cycles/sample
  Tensor<Complex, 2> multipliers;   // C x (L/2 + 1)
  std::size_t transform_len = 0;
  SolveStats stats;

  std::size_t num_modes() const noexcept { return mode_spectra.extent(0); }
  std::size_t channels() const noexcept { return mode_spectra.extent(1); }
  std::size_t num_bins() const noexcept { return mode_spectra.extent(2); }
  double bin_freq(std::size_t m) const noexcept {
    return static_cast<double>(m) / static_cast<double>(transform_len);
  }
};

/// C x (L/2 + 1) half spectra of the whole signal (L-point transform).
Tensor<Complex, 2> whole_signal_spectra(const MultichannelSignal& signal);

VmdState make_vmd_state(const Tensor<Complex, 2>& input, std::size_t transform_len,
                        const std::vector<double>& init_freqs);

/// Wiener-style update of mode k on channel c, in place. Modes i < k are
/// expected to hold this sweep's values already. Returns the change
/// contribution for the convergence test.
ChangeAccumulator vmd_mode_update(VmdState& state, const Tensor<Complex, 2>& input, std::size_t k,
                                  std::size_t c, double alpha);

/// Power-weighted spectral centroid of mode k pooled over channels.
/// Returns false (and keeps the old value) when the mode has no energy.
bool vmd_freq_update(VmdState& state, std::size_t k);

/// lambda_c += dual_step * (x_c - sum_k u_kc).
void vmd_multiplier_update(VmdState& state, const Tensor<Complex, 2>& input, std::size_t c,
                           double dual_step);

/// Runs full sweeps until the largest per-(k, c) change drops below the
/// tolerance or max_iters is reached.
VmdState vmd_solve(const Tensor<Complex, 2>& input, std::size_t transform_len,
                   const DecompositionConfig& config, const SolverOptions& options = {});

/// C = 1 is classic VMD, C > 1 is MVMD.
ModeSet vmd_decompose(const MultichannelSignal& signal, const DecompositionConfig& config,
                      const SolverOptions& options = {});

}  // namespace stvmd

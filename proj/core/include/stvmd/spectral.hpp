#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stvmd/types.hpp"

namespace stvmd {

struct WindowVector {
  std::vector<double> coeffs;
  WindowKind kind = WindowKind::Hamming;

  std::size_t size() const noexcept { return coeffs.size(); }
};

/// Symmetric window of even length n >= 2 (BadWindow otherwise).
/// Hamming is 0.54 - 0.46 cos(2 pi j / (n - 1)), Hann the 0.5/0.5 variant.
WindowVector make_window(WindowKind kind, std::size_t n);

/// Mirror padding that does not repeat the edge sample (x[-1] = x[1]).
/// Both pad widths must be smaller than the input length (PadTooLarge).
std::vector<double> reflect_pad(std::span<const double> x, std::size_t left, std::size_t right);

/// Where each frame sits relative to the original samples. A frame centered
/// at sample c spans samples c - N/2 + 1 .. c + N/2, i.e. window offsets
/// -N/2 < n <= N/2.
struct FrameLayout {
  std::vector<std::size_t> centers;
  std::size_t window_len = 0;
  std::size_t pad_left = 0;
  std::size_t pad_right = 0;
  std::size_t hop = 1;
  std::size_t signal_length = 0;

  std::size_t num_frames() const noexcept { return centers.size(); }
  // Original sample index of frame slot 0 (may be negative at the edges).
  std::ptrdiff_t first_sample(std::size_t frame) const noexcept {
    return static_cast<std::ptrdiff_t>(centers[frame]) - static_cast<std::ptrdiff_t>(window_len / 2) + 1;
  }
};

struct WindowedTensor {
  Tensor<double, 3> frames;  // C x T x N
  FrameLayout layout;

  std::size_t channels() const noexcept { return frames.extent(0); }
  std::size_t num_frames() const noexcept { return frames.extent(1); }
  std::size_t window_len() const noexcept { return frames.extent(2); }
};

struct WindowedSpectra {
  Tensor<Complex, 3> spectra;  // C x T x (N/2 + 1)
  FrameLayout layout;

  std::size_t channels() const noexcept { return spectra.extent(0); }
  std::size_t num_frames() const noexcept { return spectra.extent(1); }
  std::size_t num_bins() const noexcept { return spectra.extent(2); }
  std::size_t transform_len() const noexcept { return layout.window_len; }
  double bin_freq(std::size_t m) const noexcept {
    return static_cast<double>(m) / static_cast<double>(layout.window_len);
  }
  std::vector<double> bin_freqs() const;
};

/// Offline framing: N/2 reflective padding on both sides and one frame
/// centered on every hop-th sample, so T = ceil(L / hop).
WindowedTensor frame_signal(const MultichannelSignal& signal, const WindowVector& window,
                            std::size_t hop = 1);

/// Streaming framing for a block whose left context is real data: right-side
/// padding only, frames centered on samples N/2 - 1 .. L - 1 (hop 1).
WindowedTensor frame_block_causal(const MultichannelSignal& block, const WindowVector& window);

/// Per-frame N-point transform, bins 0..N/2.
WindowedSpectra forward_spectra(const WindowedTensor& frames);

/// Hermitian inverse of every frame; returns real frames.
WindowedTensor inverse_spectra(const WindowedSpectra& spectra);

/// x[n] = sum_t frame_t[n] / sum_t w[n - center_t] over the original support.
/// Throws ZeroWindowSum if some sample is not covered by a nonzero weight.
Tensor<double, 2> overlap_add_recover(const WindowedTensor& frames, const WindowVector& window);

/// Same as overlap_add_recover restricted to samples [first, first + count).
Tensor<double, 2> overlap_add_recover(const WindowedTensor& frames, const WindowVector& window,
                                      std::size_t first, std::size_t count);

}  // namespace stvmd

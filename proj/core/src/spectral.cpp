#include "stvmd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stvmd/error.hpp"
#include "stvmd/fft.hpp"

namespace stvmd {

WindowVector make_window(WindowKind kind, std::size_t n) {
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorCode::BadWindow, "window length must be even and >= 2, got " + std::to_string(n));
  }
  WindowVector w;
  w.kind = kind;
  w.coeffs.resize(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    const double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / denom);
    switch (kind) {
      case WindowKind::Hamming: w.coeffs[j] = 0.54 - 0.46 * c; break;
      case WindowKind::Hann: w.coeffs[j] = 0.5 - 0.5 * c; break;
      case WindowKind::Rectangular: w.coeffs[j] = 1.0; break;
    }
  }
  return w;
}

std::vector<double> reflect_pad(std::span<const double> x, std::size_t left, std::size_t right) {
  const std::size_t len = x.size();
  if ((left > 0 || right > 0) && (left >= len || right >= len)) {
    throw Error(ErrorCode::PadTooLarge, "cannot mirror " + std::to_string(std::max(left, right)) +
                                            " samples of a length-" + std::to_string(len) + " signal");
  }
  std::vector<double> out;
  out.reserve(len + left + right);
  for (std::size_t i = left; i > 0; --i) out.push_back(x[i]);
  out.insert(out.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= right; ++i) out.push_back(x[len - 1 - i]);
  return out;
}

namespace {

WindowedTensor frame_with_layout(const MultichannelSignal& signal, const WindowVector& window,
                                 FrameLayout layout) {
  const std::size_t n = window.size();
  const std::size_t channels = signal.channels();
  WindowedTensor out{Tensor<double, 3>({channels, layout.num_frames(), n}), std::move(layout)};
  for (std::size_t c = 0; c < channels; ++c) {
    const auto padded = reflect_pad(signal.channel(c), out.layout.pad_left, out.layout.pad_right);
    for (std::size_t t = 0; t < out.layout.num_frames(); ++t) {
      const std::ptrdiff_t start =
          out.layout.first_sample(t) + static_cast<std::ptrdiff_t>(out.layout.pad_left);
      auto frame = out.frames.lane(c, t);
      for (std::size_t j = 0; j < n; ++j) {
        frame[j] = padded[static_cast<std::size_t>(start) + j] * window.coeffs[j];
      }
    }
  }
  return out;
}

}  // namespace

WindowedTensor frame_signal(const MultichannelSignal& signal, const WindowVector& window,
                            std::size_t hop) {
  if (hop < 1) throw Error(ErrorCode::BadConfig, "hop must be >= 1");
  const std::size_t n = window.size();
  const std::size_t len = signal.length();
  FrameLayout layout;
  layout.window_len = n;
  layout.pad_left = n / 2;
  layout.pad_right = n / 2;
  layout.hop = hop;
  layout.signal_length = len;
  for (std::size_t c = 0; c < len; c += hop) layout.centers.push_back(c);
  return frame_with_layout(signal, window, std::move(layout));
}

WindowedTensor frame_block_causal(const MultichannelSignal& block, const WindowVector& window) {
  const std::size_t n = window.size();
  const std::size_t len = block.length();
  if (len < n / 2) {
    throw Error(ErrorCode::PadTooLarge, "block shorter than half a window");
  }
  FrameLayout layout;
  layout.window_len = n;
  layout.pad_left = 0;
  layout.pad_right = n / 2;
  layout.hop = 1;
  layout.signal_length = len;
  for (std::size_t c = n / 2 - 1; c < len; ++c) layout.centers.push_back(c);
  return frame_with_layout(block, window, std::move(layout));
}

std::vector<double> WindowedSpectra::bin_freqs() const {
  std::vector<double> f(num_bins());
  for (std::size_t m = 0; m < f.size(); ++m) f[m] = bin_freq(m);
  return f;
}

WindowedSpectra forward_spectra(const WindowedTensor& frames) {
  const RealFft fft(frames.window_len());
  WindowedSpectra out{Tensor<Complex, 3>({frames.channels(), frames.num_frames(), fft.bins()}),
                      frames.layout};
  for (std::size_t c = 0; c < frames.channels(); ++c) {
    for (std::size_t t = 0; t < frames.num_frames(); ++t) {
      fft.forward(frames.frames.lane(c, t), out.spectra.lane(c, t));
    }
  }
  return out;
}

WindowedTensor inverse_spectra(const WindowedSpectra& spectra) {
  const RealFft fft(spectra.transform_len());
  WindowedTensor out{
      Tensor<double, 3>({spectra.channels(), spectra.num_frames(), spectra.transform_len()}),
      spectra.layout};
  for (std::size_t c = 0; c < spectra.channels(); ++c) {
    for (std::size_t t = 0; t < spectra.num_frames(); ++t) {
      fft.inverse(spectra.spectra.lane(c, t), out.frames.lane(c, t));
    }
  }
  return out;
}

Tensor<double, 2> overlap_add_recover(const WindowedTensor& frames, const WindowVector& window,
                                      std::size_t first, std::size_t count) {
  const FrameLayout& layout = frames.layout;
  const std::size_t n = window.size();
  if (frames.window_len() != n) {
    throw Error(ErrorCode::ShapeMismatch, "window length differs from frame length");
  }
  if (first + count > layout.signal_length) {
    throw Error(ErrorCode::ShapeMismatch, "recovery range exceeds the signal");
  }
  const auto lo = static_cast<std::ptrdiff_t>(first);
  const auto hi = static_cast<std::ptrdiff_t>(first + count);
  Tensor<double, 2> num({frames.channels(), count});
  std::vector<double> den(count, 0.0);
  for (std::size_t t = 0; t < frames.num_frames(); ++t) {
    const std::ptrdiff_t start = layout.first_sample(t);
    const std::ptrdiff_t j0 = std::max<std::ptrdiff_t>(0, lo - start);
    const std::ptrdiff_t j1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n), hi - start);
    for (std::ptrdiff_t j = j0; j < j1; ++j) {
      den[static_cast<std::size_t>(start + j - lo)] += window.coeffs[static_cast<std::size_t>(j)];
    }
    for (std::size_t c = 0; c < frames.channels(); ++c) {
      const auto frame = frames.frames.lane(c, t);
      auto row = num.lane(c);
      for (std::ptrdiff_t j = j0; j < j1; ++j) {
        row[static_cast<std::size_t>(start + j - lo)] += frame[static_cast<std::size_t>(j)];
      }
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!(std::abs(den[i]) > 0.0)) {
      throw Error(ErrorCode::ZeroWindowSum, "window weights vanish at sample " + std::to_string(first + i));
    }
  }
  for (std::size_t c = 0; c < frames.channels(); ++c) {
    auto row = num.lane(c);
    for (std::size_t i = 0; i < count; ++i) row[i] /= den[i];
  }
  return num;
}

Tensor<double, 2> overlap_add_recover(const WindowedTensor& frames, const WindowVector& window) {
  return overlap_add_recover(frames, window, 0, frames.layout.signal_length);
}

}  // namespace stvmd

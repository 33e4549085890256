#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace stvmd {

// Real-input DFT of a fixed length n, keeping bins 0..n/2.
//
//   forward: X[m] = sum_j x[j] exp(-2 pi i m j / n)
//   inverse: x[j] = (1/n) sum over the Hermitian extension of X
//
// The inverse ignores the imaginary part of bin 0 (and of bin n/2 for even
// n), which is what projecting a half spectrum back onto real signals means.
// Instances are cheap to copy; plans are shared per length.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t bins() const noexcept { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  struct Plan;
  std::size_t n_;
  std::shared_ptr<const Plan> plan_;
};

}  // namespace stvmd

#include "stvmd/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cassert>
#include <map>
#include <mutex>
#include <vector>

namespace stvmd {

namespace {

// The FFTW planner is not thread-safe; executing a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

}  // namespace

struct RealFft::Plan {
  std::size_t n = 0;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit Plan(std::size_t len) : n(len) {
    std::unique_ptr<double, FftwDeleter> real(fftw_alloc_real(n));
    std::unique_ptr<fftw_complex, FftwDeleter> spec(fftw_alloc_complex(n / 2 + 1));
    std::lock_guard lock(planner_mutex());
    const int ni = static_cast<int>(n);
    r2c = fftw_plan_dft_r2c_1d(ni, real.get(), spec.get(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    c2r = fftw_plan_dft_c2r_1d(ni, spec.get(), real.get(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }

  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

RealFft::RealFft(std::size_t n) : n_(n) {
  assert(n >= 1);
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::weak_ptr<const Plan>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  plan_ = slot.lock();
  if (!plan_) {
    plan_ = std::make_shared<const Plan>(n);
    slot = plan_;
  }
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  assert(in.size() == n_ && out.size() == bins());
  // Out-of-place r2c leaves its input untouched.
  fftw_execute_dft_r2c(plan_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  assert(in.size() == bins() && out.size() == n_);
  // c2r overwrites its input, so work on a copy.
  thread_local std::vector<std::complex<double>> scratch;
  scratch.assign(in.begin(), in.end());
  // c2r assumes a Hermitian input; make the self-conjugate bins real.
  scratch[0].imag(0.0);
  if (n_ % 2 == 0) scratch[n_ / 2].imag(0.0);
  fftw_execute_dft_c2r(plan_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
}

}  // namespace stvmd

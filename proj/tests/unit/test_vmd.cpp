#include <gtest/gtest.h>

#include <limits>

#include "oracles.hpp"
#include "stvmd/config.hpp"
#include "stvmd/error.hpp"
#include "stvmd/signals.hpp"
#include "stvmd/vmd.hpp"

using namespace stvmd;

namespace {

struct RandomVmd {
  Tensor<Complex, 2> input;
  VmdState state;
};

RandomVmd random_vmd(std::mt19937_64& rng, std::size_t K, std::size_t C, std::size_t L) {
  const std::size_t B = L / 2 + 1;
  RandomVmd r;
  r.input = Tensor<Complex, 2>({C, B});
  for (auto& v : r.input.flat()) v = oracle::random_complex(rng);
  std::vector<double> init(K);
  std::uniform_real_distribution<double> f(0.0, 0.5);
  for (std::size_t k = 1; k < K; ++k) init[k] = f(rng);
  r.state = make_vmd_state(r.input, L, init);
  for (auto& v : r.state.mode_spectra.flat()) v = oracle::random_complex(rng);
  for (auto& v : r.state.multipliers.flat()) v = oracle::random_complex(rng);
  return r;
}

}  // namespace

TEST(ChangeAccumulator, QuotientRules) {
  EXPECT_DOUBLE_EQ((ChangeAccumulator{1.0, 4.0}.quotient()), 0.25);
  EXPECT_EQ((ChangeAccumulator{0.0, 0.0}.quotient()), 0.0);
  EXPECT_EQ((ChangeAccumulator{1e-300, 0.0}.quotient()), std::numeric_limits<double>::infinity());
}

TEST(VmdUpdates, ModeUpdateMatchesScalarQuotient) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    auto r = random_vmd(rng, 4, 2, 18);
    const auto before = r.state.mode_spectra;
    const std::size_t k = static_cast<std::size_t>(rep % 4), c = static_cast<std::size_t>(rep % 2);
    const double alpha = 10.0 + rep;
    const auto acc = vmd_mode_update(r.state, r.input, k, c, alpha);
    double diff = 0.0, prev = 0.0;
    for (std::size_t m = 0; m < r.state.num_bins(); ++m) {
      oracle::cd rest = 0.0;
      for (std::size_t i = 0; i < 4; ++i) {
        if (i != k) rest += before(i, c, m);
      }
      const double d = static_cast<double>(m) / 18.0 - r.state.freqs[k];
      const oracle::cd expect =
          (r.input(c, m) - rest + r.state.multipliers(c, m) / 2.0) / (1.0 + 2.0 * alpha * d * d);
      EXPECT_NEAR(std::abs(r.state.mode_spectra(k, c, m) - expect), 0.0, 1e-12);
      diff += std::norm(expect - before(k, c, m));
      prev += std::norm(before(k, c, m));
    }
    EXPECT_NEAR(acc.diff, diff, 1e-10);
    EXPECT_NEAR(acc.prev, prev, 1e-10);
    // Other lanes untouched.
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t cc = 0; cc < 2; ++cc) {
        if (i == k && cc == c) continue;
        for (std::size_t m = 0; m < r.state.num_bins(); ++m) EXPECT_EQ(r.state.mode_spectra(i, cc, m), before(i, cc, m));
      }
    }
  }
}

TEST(VmdUpdates, FrequencyIsPooledCentroid) {
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 50; ++rep) {
    auto r = random_vmd(rng, 3, 3, 20);
    const std::size_t k = 1 + static_cast<std::size_t>(rep % 2);
    long double num = 0, den = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t m = 0; m < r.state.num_bins(); ++m) {
        const long double p = std::norm(r.state.mode_spectra(k, c, m));
        num += p * m / 20.0L;
        den += p;
      }
    }
    ASSERT_TRUE(vmd_freq_update(r.state, k));
    EXPECT_NEAR(r.state.freqs[k], static_cast<double>(num / den), 1e-12);
  }
}

TEST(VmdUpdates, EmptyModeKeepsFrequency) {
  std::mt19937_64 rng(23);
  auto r = random_vmd(rng, 3, 1, 10);
  for (std::size_t m = 0; m < r.state.num_bins(); ++m) r.state.mode_spectra(2, 0, m) = 0.0;
  const double old = r.state.freqs[2];
  EXPECT_FALSE(vmd_freq_update(r.state, 2));
  EXPECT_EQ(r.state.freqs[2], old);
}

TEST(VmdUpdates, MultiplierAscent) {
  std::mt19937_64 rng(24);
  auto r = random_vmd(rng, 3, 2, 12);
  const auto before = r.state.multipliers;
  vmd_multiplier_update(r.state, r.input, 1, 0.5);
  for (std::size_t m = 0; m < r.state.num_bins(); ++m) {
    oracle::cd sum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) sum += r.state.mode_spectra(k, 1, m);
    EXPECT_NEAR(std::abs(r.state.multipliers(1, m) - (before(1, m) + 0.5 * (r.input(1, m) - sum))), 0.0, 1e-13);
    EXPECT_EQ(r.state.multipliers(0, m), before(0, m));
  }
  const auto frozen = r.state.multipliers;
  vmd_multiplier_update(r.state, r.input, 1, 0.0);
  EXPECT_EQ(r.state.multipliers, frozen);
}

TEST(VmdSolve, TwoToneFrequencies) {
  const auto x = gen_two_tone(128.0, 10.0);
  DecompositionConfig c;
  const auto modes = vmd_decompose(x, c);
  EXPECT_EQ(modes.freqs.at(0, 0), 0.0);
  EXPECT_NEAR(modes.freqs.at(1, 0) * 128.0, 20.0, 0.5);
  EXPECT_NEAR(modes.freqs.at(2, 0) * 128.0, 28.0, 0.5);
  EXPECT_TRUE(modes.stats.converged);
  EXPECT_EQ(modes.num_windows(), 1u);
  EXPECT_EQ(modes.transform_len, x.length());
  EXPECT_EQ(modes.length(), x.length());
}

TEST(VmdSolve, MultichannelSharesOneFrequencyPerMode) {
  const auto x = gen_common_mode_pair(128.0, 4.0);
  DecompositionConfig c;
  c.num_modes = 4;
  const auto modes = vmd_decompose(x, c);
  EXPECT_FALSE(modes.freqs.is_dynamic());
  EXPECT_EQ(modes.freqs.num_modes(), 4u);
  EXPECT_EQ(modes.freqs.num_columns(), 1u);
  EXPECT_EQ(modes.channels(), 2u);
}

TEST(VmdSolve, ZeroSignalStaysAtInit) {
  const MultichannelSignal zero(Tensor<double, 2>({1, 64}), 1.0);
  DecompositionConfig c;
  const auto modes = vmd_decompose(zero, c);
  const auto init = init_frequencies(c).column(0);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(modes.freqs.at(k, 0), init[k]);
  for (double v : modes.mode_time.flat()) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(modes.stats.converged);
  EXPECT_GT(modes.stats.zero_energy_events, 0u);
}

TEST(VmdSolve, ObserverSeesPinnedResidual) {
  const auto x = gen_two_tone(128.0, 2.0);
  std::size_t calls = 0;
  bool pinned = true;
  SolverOptions opts;
  opts.observer = [&](const IterationEvent& ev) {
    ++calls;
    EXPECT_EQ(ev.iteration, calls);
    pinned = pinned && ev.freqs.at(kResidualIndex, 0) == 0.0;
  };
  const auto modes = vmd_decompose(x, {}, opts);
  EXPECT_EQ(calls, modes.stats.iterations);
  EXPECT_TRUE(pinned);
}

TEST(VmdSolve, RejectsNonFinite) {
  std::vector<double> v(32, 1.0);
  v[3] = std::numeric_limits<double>::quiet_NaN();
  const MultichannelSignal x(std::vector<std::vector<double>>{v}, 1.0);
  EXPECT_THROW(vmd_decompose(x, {}), Error);
}

TEST(VmdSolve, Deterministic) {
  const auto x = gen_sim1(128.0, 2.0, {0.2, 4});
  const auto a = vmd_decompose(x, {});
  const auto b = vmd_decompose(x, {});
  EXPECT_EQ(a.mode_time, b.mode_time);
  EXPECT_EQ(a.freqs, b.freqs);
}

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "stvmd/config.hpp"
#include "stvmd/error.hpp"
#include "stvmd/metrics.hpp"
#include "stvmd/signals.hpp"
#include "stvmd/stvmd.hpp"

using namespace stvmd;

namespace {

WindowedSpectra random_spectra(std::mt19937_64& rng, std::size_t C, std::size_t T, std::size_t N) {
  WindowedSpectra s;
  s.spectra = Tensor<Complex, 3>({C, T, N / 2 + 1});
  for (auto& v : s.spectra.flat()) v = oracle::random_complex(rng);
  s.layout.window_len = N;
  s.layout.signal_length = T;
  for (std::size_t t = 0; t < T; ++t) s.layout.centers.push_back(t);
  return s;
}

StvmdState random_state(std::mt19937_64& rng, const WindowedSpectra& in, std::size_t K, bool dynamic) {
  std::uniform_real_distribution<double> f(0.0, 0.5);
  const std::size_t T = in.num_frames();
  FrequencyState init;
  if (dynamic) {
    Tensor<double, 2> om({K, T});
    for (auto& v : om.flat()) v = f(rng);
    init = FrequencyState::make_dynamic(om);
  } else {
    std::vector<double> v(K);
    for (auto& x : v) x = f(rng);
    init = FrequencyState::make_static(v);
  }
  auto s = make_stvmd_state(in, init);
  for (auto& v : s.mode_spectra.flat()) v = oracle::random_complex(rng);
  for (auto& v : s.multipliers.flat()) v = oracle::random_complex(rng);
  return s;
}

}  // namespace

TEST(StvmdState, ResidualRowZeroedAndShapes) {
  std::mt19937_64 rng(1);
  const auto in = random_spectra(rng, 2, 5, 8);
  auto s = random_state(rng, in, 3, true);
  EXPECT_EQ(s.mode_spectra.shape(), (Tensor<Complex, 4>::Shape{3, 2, 5, 5}));
  EXPECT_EQ(s.multipliers.shape(), (Tensor<Complex, 3>::Shape{2, 5, 5}));
  for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(s.freqs.at(0, t), 0.0);
  EXPECT_THROW(make_stvmd_state(in, FrequencyState::replicate(std::vector<double>{0, .1, .2}, 4)), Error);
}

TEST(StvmdUpdates, ModeUpdateMatchesScalarQuotient) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 40; ++rep) {
    const auto in = random_spectra(rng, 2, 4, 10);
    auto s = random_state(rng, in, 3, rep % 2);
    const auto before = s.mode_spectra;
    const std::size_t k = rep % 3, c = rep % 2, t = rep % 4;
    const double om = s.freqs.at(k, t), alpha = 5.0 + rep;
    stvmd_mode_update(s, in, k, c, t, om, alpha);
    for (std::size_t m = 0; m < 6; ++m) {
      oracle::cd rest = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        if (i != k) rest += before(i, c, t, m);
      }
      const double d = m / 10.0 - om;
      const oracle::cd expect = (in.spectra(c, t, m) - rest + 0.5 * s.multipliers(c, t, m)) / (1 + 2 * alpha * d * d);
      EXPECT_NEAR(std::abs(s.mode_spectra(k, c, t, m) - expect), 0.0, 1e-12);
    }
  }
}

TEST(StvmdUpdates, StaticAndDynamicCentroids) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const auto in = random_spectra(rng, 3, 6, 8);
    auto st = random_state(rng, in, 3, false);
    long double num = 0, den = 0;
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t t = 0; t < 6; ++t)
        for (std::size_t m = 0; m < 5; ++m) {
          const long double p = std::norm(st.mode_spectra(1, c, t, m));
          num += p * m / 8.0L;
          den += p;
        }
    ASSERT_TRUE(stvmd_freq_update_static(st, 1));
    EXPECT_NEAR(st.freqs.at(1, 0), static_cast<double>(num / den), 1e-12);

    auto dy = random_state(rng, in, 3, true);
    const std::size_t t = rep % 6;
    num = den = 0;
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t m = 0; m < 5; ++m) {
        const long double p = std::norm(dy.mode_spectra(2, c, t, m));
        num += p * m / 8.0L;
        den += p;
      }
    const auto others = dy.freqs;
    ASSERT_TRUE(stvmd_freq_update_dynamic(dy, 2, t));
    EXPECT_NEAR(dy.freqs.at(2, t), static_cast<double>(num / den), 1e-12);
    for (std::size_t tt = 0; tt < 6; ++tt) {
      if (tt != t) EXPECT_EQ(dy.freqs.at(2, tt), others.at(2, tt));
    }
  }
}

TEST(StvmdUpdates, EmptyWindowKeepsFrequency) {
  std::mt19937_64 rng(4);
  const auto in = random_spectra(rng, 1, 3, 8);
  auto s = random_state(rng, in, 3, true);
  for (std::size_t m = 0; m < 5; ++m) s.mode_spectra(1, 0, 2, m) = 0.0;
  const double old = s.freqs.at(1, 2);
  EXPECT_FALSE(stvmd_freq_update_dynamic(s, 1, 2));
  EXPECT_EQ(s.freqs.at(1, 2), old);
}

TEST(StvmdSolve, SingleWindowVariantsCoincide) {
  // With one window the dynamic and static frequency updates are the same sum.
  std::mt19937_64 rng(5);
  const auto in = random_spectra(rng, 2, 1, 32);
  DecompositionConfig c;
  c.window_len = 32;
  c.max_iters = 40;
  const auto a = stvmd_solve(in, c, StvmdVariant::NonDynamic);
  const auto b = stvmd_solve(in, c, StvmdVariant::Dynamic);
  EXPECT_EQ(a.mode_spectra, b.mode_spectra);
  EXPECT_EQ(a.freqs.values(), b.freqs.values());
}

TEST(StvmdSolve, NonDynamicTwoTone) {
  const auto x = gen_two_tone(128.0, 4.0);
  DecompositionConfig c;
  const auto modes = stvmd_decompose(x, c, StvmdVariant::NonDynamic);
  EXPECT_FALSE(modes.freqs.is_dynamic());
  EXPECT_NEAR(modes.freqs.at(1, 0) * 128, 20.0, 1.0);
  EXPECT_NEAR(modes.freqs.at(2, 0) * 128, 28.0, 1.0);
  EXPECT_EQ(modes.num_windows(), x.length());
  EXPECT_LT(reconstruction_rmse(x, modes).overall, 0.05);
}

TEST(StvmdSolve, DynamicFollowsChirps) {
  const auto x = gen_sim2(128.0, 1.0, {0.0, 0});
  DecompositionConfig c;
  const auto modes = stvmd_decompose(x, c, StvmdVariant::Dynamic);
  ASSERT_TRUE(modes.freqs.is_dynamic());
  ASSERT_EQ(modes.freqs.num_columns(), x.length());
  // Interior windows: tracks near 40t + 10 and 40t + 20.
  double err1 = 0.0, err2 = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 32; t + 32 < x.length(); ++t) {
    const double time = t / 128.0;
    err1 += std::abs(modes.freqs.at(1, t) * 128 - (40 * time + 10));
    err2 += std::abs(modes.freqs.at(2, t) * 128 - (40 * time + 20));
    ++n;
  }
  EXPECT_LT(err1 / n, 2.0);
  EXPECT_LT(err2 / n, 2.0);
}

TEST(StvmdSolve, HopGreaterThanOne) {
  const auto x = gen_two_tone(128.0, 3.0);
  DecompositionConfig c;
  c.hop = 4;
  const auto modes = stvmd_decompose(x, c, StvmdVariant::Dynamic);
  EXPECT_EQ(modes.num_windows(), (x.length() + 3) / 4);
  EXPECT_EQ(modes.hop, 4u);
  EXPECT_LT(reconstruction_rmse(x, modes).overall, 0.05);
}

TEST(StvmdSolve, ObserverAndDeterminism) {
  const auto x = gen_sim1(128.0, 2.0, {0.2, 1});
  bool pinned = true;
  std::size_t calls = 0;
  SolverOptions opts;
  opts.observer = [&](const IterationEvent& ev) {
    ++calls;
    for (std::size_t t = 0; t < ev.freqs.num_columns(); ++t) pinned = pinned && ev.freqs.at(0, t) == 0.0;
  };
  DecompositionConfig c;
  c.max_iters = 25;
  const auto a = stvmd_decompose(x, c, StvmdVariant::Dynamic, opts);
  const auto b = stvmd_decompose(x, c, StvmdVariant::Dynamic);
  EXPECT_TRUE(pinned);
  EXPECT_EQ(calls, a.stats.iterations);
  EXPECT_EQ(a.mode_time, b.mode_time);
  EXPECT_EQ(a.freqs, b.freqs);
}

TEST(StvmdSolve, ReconstructionSumsToRecoveredSignal) {
  const auto x = gen_two_tone(64.0, 2.0);
  DecompositionConfig c;
  c.window_len = 16;
  const auto modes = stvmd_decompose(x, c, StvmdVariant::NonDynamic);
  const auto frames = frame_signal(x, make_window(c.window_kind, c.window_len));
  const auto in = forward_spectra(frames);
  auto st = stvmd_solve(in, c, StvmdVariant::NonDynamic);
  const auto part = reconstruct_modes(st, in.layout, make_window(c.window_kind, c.window_len), 10, 5);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(part(k, 0, i), modes.mode_time(k, 0, 10 + i), 1e-12);
  }
}

TEST(StvmdDiagnostics, BandwidthPowerFormula) {
  const auto x = gen_two_tone(64.0, 1.0);
  DecompositionConfig c;
  c.window_len = 16;
  c.max_iters = 10;
  const auto modes = stvmd_decompose(x, c, StvmdVariant::Dynamic);
  const auto p = mode_bandwidth_power(modes, 1);
  ASSERT_EQ(p.size(), modes.num_windows());
  for (std::size_t t = 0; t < p.size(); t += 7) {
    double expect = 0.0;
    for (std::size_t m = 0; m < modes.num_bins(); ++m) {
      const double d = 2 * oracle::kPi * (m / 16.0 - modes.freqs.at(1, t));
      expect += d * d * std::norm(modes.mode_spectra(1, 0, t, m));
    }
    EXPECT_NEAR(p[t], expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(StvmdDiagnostics, MedianSmoothing) {
  Tensor<double, 2> om({2, 6});
  const double row[6] = {0.1, 0.1, 0.4, 0.1, 0.2, 0.2};
  for (std::size_t t = 0; t < 6; ++t) om(1, t) = row[t];
  const auto sm = smooth_frequency_tracks(FrequencyState::make_dynamic(om), 3);
  EXPECT_DOUBLE_EQ(sm.at(1, 2), 0.1);
  EXPECT_DOUBLE_EQ(sm.at(1, 4), 0.2);
  EXPECT_EQ(sm.at(0, 3), 0.0);
  const auto st = FrequencyState::make_static({0.0, 0.3});
  EXPECT_EQ(smooth_frequency_tracks(st, 3), st);
}

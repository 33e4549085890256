#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "stvmd/error.hpp"
#include "stvmd/signals.hpp"

using namespace stvmd;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no stvmd::Error thrown";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Signals, SteppedFundamental) {
  EXPECT_EQ(stepped_fundamental_hz(0.0), 15.0);
  EXPECT_EQ(stepped_fundamental_hz(1.5), 18.0);
  EXPECT_EQ(stepped_fundamental_hz(7.99), 20.0);
  EXPECT_EQ(stepped_fundamental_hz(8.2), 15.0);
  EXPECT_EQ(sample_count(128.0, 8.0), 1024u);
  EXPECT_EQ(sample_count(250.0, 10.0), 2500u);
}

TEST(Signals, TwoToneFormula) {
  const auto x = gen_two_tone(128.0, 10.0);
  ASSERT_EQ(x.length(), 1280u);
  for (std::size_t i : {0u, 5u, 333u, 1279u}) {
    const double t = i / 128.0;
    EXPECT_NEAR(x(0, i), std::sin(2 * oracle::kPi * 20 * t) + 0.5 * std::sin(2 * oracle::kPi * 28 * t), 1e-12);
  }
}

TEST(Signals, NoiseFreeSim1MatchesStaircase) {
  const auto x = gen_sim1(128.0, 8.0, {0.0, 0});
  for (std::size_t i = 0; i < x.length(); i += 37) {
    const double t = i / 128.0;
    const double w = stepped_fundamental_hz(t);
    EXPECT_NEAR(x(0, i), std::sin(2 * oracle::kPi * w * t) + 0.5 * std::sin(2 * oracle::kPi * 2 * w * t), 1e-12);
  }
}

TEST(Signals, NoiseIsSeededAndScaled) {
  const auto a = white_noise(20000, {0.2, 7});
  const auto b = white_noise(20000, {0.2, 7});
  const auto c = white_noise(20000, {0.2, 8});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  double ss = 0.0;
  for (double v : a) ss += v * v;
  EXPECT_NEAR(std::sqrt(ss / a.size()), 0.2, 0.005);
}

TEST(Signals, AlignmentPairChannelsDifferInHarmonicAndNoise) {
  const auto clean = gen_alignment_pair(128.0, 2.0, {0.0, 0});
  ASSERT_EQ(clean.channels(), 2u);
  const double t = 10 / 128.0;
  const double w = stepped_fundamental_hz(t);
  EXPECT_NEAR(clean(1, 10), std::sin(2 * oracle::kPi * w * t) + 0.5 * std::sin(2 * oracle::kPi * 3 * w * t), 1e-12);
  const auto noisy = gen_alignment_pair(128.0, 2.0, {0.2, 3});
  const double n0 = noisy(0, 50) - clean(0, 50), n1 = noisy(1, 50) - clean(1, 50);
  EXPECT_NE(n0, n1);
}

TEST(Signals, SsvepSurrogateShape) {
  const auto rec = gen_ssvep_surrogate(250.0, 10.0, {1.0, 0});
  EXPECT_EQ(rec.num_epochs(), 6u);
  EXPECT_EQ(rec.channels(), 1u);
  EXPECT_EQ(rec.length(), 2500u);
  EXPECT_EQ(rec.channel_names, std::vector<std::string>{"Oz"});
  // Averaging six independent epochs shrinks the noise.
  const auto clean = gen_ssvep_surrogate(250.0, 10.0, {0.0, 0});
  const auto avg = average_epochs(rec);
  double ss = 0.0, ss0 = 0.0;
  for (std::size_t i = 0; i < 2500; ++i) {
    ss += std::pow(avg(0, i) - clean.epochs(0, 0, i), 2);
    ss0 += std::pow(rec.epochs(0, 0, i) - clean.epochs(0, 0, i), 2);
  }
  EXPECT_LT(ss, 0.3 * ss0);
}

TEST(Signals, CsvRoundTripIsExact) {
  const auto rec = gen_ssvep_surrogate(250.0, 0.5, {1.0, 3}, 3);
  std::stringstream buf;
  write_csv_recording(buf, rec);
  const auto back = parse_csv_recording(buf);
  EXPECT_EQ(back.epochs, rec.epochs);
  EXPECT_EQ(back.sample_rate_hz, rec.sample_rate_hz);
  EXPECT_EQ(back.channel_names, rec.channel_names);
}

TEST(Signals, CsvErrors) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_csv_recording(in);
  };
  EXPECT_EQ(code_of([&] { parse("1,2\n3,4\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { parse("# sample_rate_hz=10\n1,x\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { parse("# sample_rate_hz=10\n1,2\n3\n"); }), ErrorCode::RaggedEpochs);
  EXPECT_EQ(code_of([&] { parse("# sample_rate_hz=10\n1,,2\n"); }), ErrorCode::RaggedEpochs);
  EXPECT_EQ(code_of([&] { parse("# sample_rate_hz=10\n# channels=a,b\n1,2,3\n"); }), ErrorCode::RaggedEpochs);
  EXPECT_EQ(code_of([&] { parse("# sample_rate_hz=10\n# epoch_len=3\n1\n2\n"); }), ErrorCode::RaggedEpochs);
  EXPECT_EQ(code_of([] { load_csv_recording("/nonexistent/x.csv"); }), ErrorCode::IoError);
  const auto rec = parse("# sample_rate_hz=10\n# channels=a,b\n1,2,3,4\n5,6,7,8\n");
  EXPECT_EQ(rec.num_epochs(), 2u);
  EXPECT_EQ(rec.epochs(1, 0, 1), 7.0);
}

TEST(Preprocess, AverageAndZscore) {
  EpochedRecording rec;
  rec.sample_rate_hz = 4.0;
  rec.channel_names = {"a"};
  rec.epochs = Tensor<double, 3>({2, 1, 4}, std::vector<double>{1, 2, 3, 4, 3, 4, 5, 6});
  const auto avg = average_epochs(rec);
  EXPECT_EQ(avg(0, 0), 2.0);
  EXPECT_EQ(avg(0, 3), 5.0);
  const auto z = zscore_channels(avg);
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < 4; ++i) mean += z(0, i) / 4;
  for (std::size_t i = 0; i < 4; ++i) var += (z(0, i) - mean) * (z(0, i) - mean) / 4;
  EXPECT_NEAR(mean, 0.0, 1e-15);
  EXPECT_NEAR(var, 1.0, 1e-14);
  const MultichannelSignal flat(std::vector<std::vector<double>>{{2, 2, 2}}, 1.0);
  EXPECT_EQ(code_of([&] { zscore_channels(flat); }), ErrorCode::DegenerateVariance);
}

TEST(Preprocess, BrickwallKeepsOnlyTheBand) {
  std::vector<std::vector<double>> rows(1);
  for (std::size_t i = 0; i < 1000; ++i) {
    const double t = i / 250.0;
    rows[0].push_back(std::sin(2 * oracle::kPi * 2 * t) + std::sin(2 * oracle::kPi * 12 * t) +
                      std::sin(2 * oracle::kPi * 60 * t));
  }
  const auto y = brickwall_bandpass(MultichannelSignal(rows, 250.0), 5.0, 30.0);
  for (std::size_t i = 0; i < 1000; ++i) EXPECT_NEAR(y(0, i), std::sin(2 * oracle::kPi * 12 * i / 250.0), 1e-10);
  EXPECT_EQ(code_of([&] { brickwall_bandpass(MultichannelSignal(rows, 250.0), 30.0, 5.0); }), ErrorCode::BadConfig);
  EXPECT_EQ(code_of([&] { brickwall_bandpass(MultichannelSignal(rows, 250.0), 5.0, 125.0); }), ErrorCode::BadConfig);
}

TEST(Preprocess, DetrendRampSpectrum) {
  // Every row is the ramp 0..5; the 5-point average (shrinking at the edges)
  // of that ramp is 1, 1.5, 2, 3, 3.5, 4.
  Tensor<double, 2> map({3, 6});
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t b = 0; b < 6; ++b) map(t, b) = static_cast<double>(b);
  const auto d = detrend_tf_map(map);
  const double expect[6] = {-1.0, -0.5, 0.0, 0.0, 0.5, 1.0};
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t b = 0; b < 6; ++b) EXPECT_NEAR(d(t, b), expect[b], 1e-15);
  EXPECT_EQ(code_of([] { detrend_tf_map(Tensor<double, 2>({2, 4})); }), ErrorCode::ShapeMismatch);
}

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "stvmd/config.hpp"
#include "stvmd/error.hpp"

using namespace stvmd;

namespace {

MultichannelSignal ramp(std::size_t len, std::size_t channels = 1) {
  std::vector<std::vector<double>> rows(channels, std::vector<double>(len));
  for (auto& r : rows) {
    for (std::size_t i = 0; i < len; ++i) r[i] = static_cast<double>(i);
  }
  return MultichannelSignal(rows, 100.0);
}

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

TEST(Config, DefaultsPassAndDeriveSizes) {
  const auto checked = validate_config({}, ramp(200, 2));
  EXPECT_EQ(checked.num_bins, 33u);
  EXPECT_EQ(checked.padded_length, 264u);
  EXPECT_EQ(checked.num_windows, 200u);
  EXPECT_EQ(checked.channels, 2u);

  DecompositionConfig c;
  c.hop = 3;
  EXPECT_EQ(validate_config(c, ramp(200)).num_windows, 67u);
}

TEST(Config, RejectsBadFields) {
  const auto x = ramp(100);
  auto with = [&](auto mutate) {
    DecompositionConfig c;
    mutate(c);
    return code_of([&] { validate_config(c, x); });
  };
  EXPECT_EQ(with([](auto& c) { c.window_len = 63; }), ErrorCode::BadWindow);
  EXPECT_EQ(with([](auto& c) { c.window_len = 0; }), ErrorCode::BadWindow);
  EXPECT_EQ(with([](auto& c) { c.window_len = 128; }), ErrorCode::WindowTooLong);
  EXPECT_EQ(with([](auto& c) { c.num_modes = 1; }), ErrorCode::BadModeCount);
  EXPECT_EQ(with([](auto& c) { c.hop = 0; }), ErrorCode::BadConfig);
  EXPECT_EQ(with([](auto& c) { c.alpha = 0.0; }), ErrorCode::BadConfig);
  EXPECT_EQ(with([](auto& c) { c.tolerance = -1.0; }), ErrorCode::BadConfig);
  EXPECT_EQ(with([](auto& c) { c.dual_step = std::nan(""); }), ErrorCode::BadConfig);
  EXPECT_EQ(with([](auto& c) { c.max_iters = 0; }), ErrorCode::BadConfig);
  EXPECT_EQ(with([](auto& c) {
              c.init = InitKind::Custom;
              c.custom_freqs = {0.0, 0.1};
            }),
            ErrorCode::CustomLengthMismatch);
  EXPECT_EQ(with([](auto& c) {
              c.init = InitKind::Custom;
              c.custom_freqs = {0.0, 0.1, 0.7};
            }),
            ErrorCode::BadConfig);
}

TEST(Config, NonFiniteSignalRejected) {
  auto x = ramp(100);
  x.channel(0)[7] = std::numeric_limits<double>::infinity();
  EXPECT_EQ(code_of([&] { validate_config({}, x); }), ErrorCode::NonFinite);
}

TEST(Config, UniformInitForFourModes) {
  DecompositionConfig c;
  c.num_modes = 4;
  const auto f = init_frequencies(c);
  EXPECT_FALSE(f.is_dynamic());
  const std::vector<double> expected{0.0, 0.125, 0.25, 0.375};
  EXPECT_EQ(f.column(0), expected);
}

TEST(Config, ZeroAndCustomInit) {
  DecompositionConfig c;
  c.init = InitKind::Zero;
  for (double v : init_frequencies(c).column(0)) EXPECT_EQ(v, 0.0);
  c.init = InitKind::Custom;
  c.custom_freqs = {0.0, 0.2, 0.3};
  const auto f = init_frequencies(c, 5);
  ASSERT_TRUE(f.is_dynamic());
  EXPECT_EQ(f.num_columns(), 5u);
  for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(f.column(t), c.custom_freqs);
}

TEST(Config, TextRoundTrip) {
  DecompositionConfig c;
  c.num_modes = 5;
  c.alpha = 123.456;
  c.window_len = 250;
  c.window_kind = WindowKind::Hann;
  c.hop = 4;
  c.dual_step = 0.1;
  c.tolerance = 1e-7;
  c.max_iters = 77;
  c.init = InitKind::Custom;
  c.custom_freqs = {0.0, 0.1, 0.2, 0.3, 1.0 / 3.0};
  EXPECT_EQ(parse_config(format_config(c)), c);
}

TEST(Config, ParseOverridesOnlyGivenKeys) {
  DecompositionConfig base;
  base.alpha = 9.0;
  const auto c = parse_config("# comment\nwindow_len = 128  # trailing\n\nwindow_kind = \"rect\"\n", base);
  EXPECT_EQ(c.window_len, 128u);
  EXPECT_EQ(c.window_kind, WindowKind::Rectangular);
  EXPECT_EQ(c.alpha, 9.0);
}

TEST(Config, ParseErrorsNameTheLine) {
  try {
    parse_config("alpha = 1\nbogus = 3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { parse_config("alpha = x\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_config("alpha\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_config("custom_freqs = 1, 2\n"); }), ErrorCode::ParseError);
}

TEST(Config, LoadFile) {
  const auto path = std::filesystem::temp_directory_path() / "stvmd_config_test.toml";
  {
    std::ofstream out(path);
    out << "num_modes = 4\nhop = 2\n";
  }
  const auto c = load_config_file(path.string());
  EXPECT_EQ(c.num_modes, 4u);
  EXPECT_EQ(c.hop, 2u);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([] { load_config_file("/nonexistent/dir/x.toml"); }), ErrorCode::IoError);
}

TEST(Types, KindNamesRoundTrip) {
  for (auto k : {WindowKind::Hamming, WindowKind::Hann, WindowKind::Rectangular}) {
    EXPECT_EQ(parse_window_kind(to_string(k)), k);
  }
  for (auto k : {InitKind::UniformHalfBand, InitKind::Zero, InitKind::Custom}) {
    EXPECT_EQ(parse_init_kind(to_string(k)), k);
  }
  EXPECT_EQ(code_of([] { parse_window_kind("kaiser"); }), ErrorCode::BadConfig);
}

TEST(Types, SignalShapeChecks) {
  EXPECT_EQ(code_of([] { MultichannelSignal(std::vector<std::vector<double>>{{1, 2}, {1}}, 1.0); }),
            ErrorCode::ShapeMismatch);
  EXPECT_EQ(code_of([] { MultichannelSignal(std::vector<std::vector<double>>{{1}}, 1.0); }),
            ErrorCode::ShapeMismatch);
  EXPECT_EQ(code_of([] { MultichannelSignal(std::vector<std::vector<double>>{{1, 2}}, 0.0); }),
            ErrorCode::BadConfig);
}

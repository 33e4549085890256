#include "stvmd/signals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "stvmd/error.hpp"
#include "stvmd/fft.hpp"

namespace stvmd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <typename F>
std::vector<double> sample(double fs, double duration, F&& f) {
  const std::size_t n = sample_count(fs, duration);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(static_cast<double>(i) / fs);
  return out;
}

void add_noise(std::vector<double>& x, const std::vector<double>& noise) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += noise[i];
}

void check_timing(double fs, double duration) {
  if (!(fs > 0.0) || !(duration > 0.0)) {
    throw Error(ErrorCode::BadConfig, "sample rate and duration must be positive");
  }
}

}  // namespace

std::vector<double> white_noise(std::size_t count, const NoiseSpec& noise) {
  std::vector<double> out(count, 0.0);
  if (noise.amplitude == 0.0) return out;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : out) v = noise.amplitude * normal(rng);
  return out;
}

double stepped_fundamental_hz(double t) {
  const auto slot = static_cast<std::size_t>(std::floor(t)) % kStepSequence.size();
  return static_cast<double>(kStepSequence[slot]) + 13.0;
}

std::size_t sample_count(double fs, double duration) {
  return static_cast<std::size_t>(std::llround(fs * duration));
}

MultichannelSignal gen_two_tone(double fs, double duration) {
  check_timing(fs, duration);
  auto x = sample(fs, duration, [](double t) {
    return std::sin(kTwoPi * 20.0 * t) + 0.5 * std::sin(kTwoPi * 28.0 * t);
  });
  return MultichannelSignal(std::vector<std::vector<double>>{std::move(x)}, fs);
}

MultichannelSignal gen_common_mode_pair(double fs, double duration) {
  check_timing(fs, duration);
  auto a = sample(fs, duration, [](double t) {
    return std::sin(kTwoPi * 20.0 * t) + 0.5 * std::sin(kTwoPi * 36.0 * t);
  });
  auto b = sample(fs, duration, [](double t) {
    return std::sin(kTwoPi * 28.0 * t) + 0.5 * std::sin(kTwoPi * 36.0 * t);
  });
  return MultichannelSignal(std::vector<std::vector<double>>{std::move(a), std::move(b)}, fs);
}

MultichannelSignal gen_sim1(double fs, double duration, const NoiseSpec& noise) {
  check_timing(fs, duration);
  auto x = sample(fs, duration, [](double t) {
    const double w = stepped_fundamental_hz(t);
    return std::sin(kTwoPi * w * t) + 0.5 * std::sin(kTwoPi * 2.0 * w * t);
  });
  add_noise(x, white_noise(x.size(), noise));
  return MultichannelSignal(std::vector<std::vector<double>>{std::move(x)}, fs);
}

MultichannelSignal gen_sim2(double fs, double duration, const NoiseSpec& noise) {
  check_timing(fs, duration);
  auto x = sample(fs, duration, [](double t) {
    return std::sin(kTwoPi * (20.0 * t + 10.0) * t) + 0.5 * std::sin(kTwoPi * (20.0 * t + 20.0) * t);
  });
  add_noise(x, white_noise(x.size(), noise));
  return MultichannelSignal(std::vector<std::vector<double>>{std::move(x)}, fs);
}

MultichannelSignal gen_sim3(double fs, double duration, const NoiseSpec& noise) {
  check_timing(fs, duration);
  auto x = sample(fs, duration, [](double t) {
    const double slow = kTwoPi * 0.25 * t;
    return std::sin(kTwoPi * (2.0 * std::sin(slow) + 10.0) * t) +
           0.5 * std::sin(kTwoPi * (1.5 * std::cos(slow) + 40.0) * t);
  });
  add_noise(x, white_noise(x.size(), noise));
  return MultichannelSignal(std::vector<std::vector<double>>{std::move(x)}, fs);
}

MultichannelSignal gen_alignment_pair(double fs, double duration, const NoiseSpec& noise) {
  check_timing(fs, duration);
  auto a = sample(fs, duration, [](double t) {
    const double w = stepped_fundamental_hz(t);
    return std::sin(kTwoPi * w * t) + 0.5 * std::sin(kTwoPi * 2.0 * w * t);
  });
  auto b = sample(fs, duration, [](double t) {
    const double w = stepped_fundamental_hz(t);
    return std::sin(kTwoPi * w * t) + 0.5 * std::sin(kTwoPi * 3.0 * w * t);
  });
  // One stream, drawn channel after channel, keeps the two noises independent.
  const auto eta = white_noise(2 * a.size(), noise);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] += eta[i];
    b[i] += eta[a.size() + i];
  }
  return MultichannelSignal(std::vector<std::vector<double>>{std::move(a), std::move(b)}, fs);
}

EpochedRecording as_recording(const MultichannelSignal& signal, std::vector<std::string> names) {
  EpochedRecording rec;
  rec.sample_rate_hz = signal.sample_rate_hz();
  rec.epochs = Tensor<double, 3>({1, signal.channels(), signal.length()},
                                 std::vector<double>(signal.samples().data()));
  if (names.empty()) {
    for (std::size_t c = 0; c < signal.channels(); ++c) names.push_back("ch" + std::to_string(c));
  }
  if (names.size() != signal.channels()) {
    throw Error(ErrorCode::ShapeMismatch, "channel name count differs from channel count");
  }
  rec.channel_names = std::move(names);
  return rec;
}

EpochedRecording gen_ssvep_surrogate(double fs, double duration, const NoiseSpec& noise,
                                     std::size_t epochs, double first_hz, double second_hz) {
  check_timing(fs, duration);
  if (epochs < 1) throw Error(ErrorCode::BadConfig, "need at least one epoch");
  const double switch_t = 0.5 * duration;
  const auto clean = sample(fs, duration, [&](double t) {
    const double f = t < switch_t ? first_hz : second_hz;
    return std::sin(kTwoPi * f * t) + 0.5 * std::sin(kTwoPi * 2.0 * f * t);
  });
  const std::size_t len = clean.size();
  EpochedRecording rec;
  rec.sample_rate_hz = fs;
  rec.channel_names = {"Oz"};
  rec.epochs = Tensor<double, 3>({epochs, 1, len});
  for (std::size_t e = 0; e < epochs; ++e) {
    const auto eta = white_noise(len, {noise.amplitude, noise.seed + e});
    auto row = rec.epochs.lane(e, 0);
    for (std::size_t i = 0; i < len; ++i) row[i] = clean[i] + eta[i];
  }
  return rec;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

Error parse_error(std::size_t line, const std::string& what) {
  return Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

bool parse_number(const std::string& text, double& v) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  return ec == std::errc{} && ptr == last && first != last;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

EpochedRecording parse_csv_recording(std::istream& in) {
  std::optional<double> rate;
  std::vector<std::string> names;
  std::optional<std::size_t> epoch_len;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(body.substr(0, eq));
      const std::string value = trim(body.substr(eq + 1));
      if (key == "sample_rate_hz") {
        double v = 0.0;
        if (!parse_number(value, v) || !(v > 0.0)) throw parse_error(line_no, "bad sample rate '" + value + "'");
        rate = v;
      } else if (key == "channels") {
        names = split(value, ',');
      } else if (key == "epoch_len") {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
          throw parse_error(line_no, "bad epoch_len '" + value + "'");
        }
        epoch_len = v;
      }
      continue;
    }
    const auto fields = split(line, ',');
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      if (f.empty()) {
        throw Error(ErrorCode::RaggedEpochs, "line " + std::to_string(line_no) + ": missing sample");
      }
      double v = 0.0;
      if (!parse_number(f, v)) throw parse_error(line_no, "bad number '" + f + "'");
      row.push_back(v);
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw Error(ErrorCode::RaggedEpochs, "line " + std::to_string(line_no) + ": expected " +
                                               std::to_string(width) + " columns, got " +
                                               std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (!rate) throw parse_error(line_no, "missing '# sample_rate_hz=' header");
  if (rows.empty()) throw parse_error(line_no, "no sample rows");
  if (names.empty()) {
    names.push_back("ch0");
  }
  const std::size_t channels = names.size();
  if (width % channels != 0) {
    throw Error(ErrorCode::RaggedEpochs, std::to_string(width) + " columns do not split into epochs of " +
                                             std::to_string(channels) + " channels");
  }
  if (epoch_len && *epoch_len != rows.size()) {
    throw Error(ErrorCode::RaggedEpochs, "epoch_len " + std::to_string(*epoch_len) + " but " +
                                             std::to_string(rows.size()) + " rows");
  }
  const std::size_t epochs = width / channels;
  EpochedRecording rec;
  rec.sample_rate_hz = *rate;
  rec.channel_names = std::move(names);
  rec.epochs = Tensor<double, 3>({epochs, channels, rows.size()});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t e = 0; e < epochs; ++e) {
      for (std::size_t c = 0; c < channels; ++c) rec.epochs(e, c, i) = rows[i][e * channels + c];
    }
  }
  return rec;
}

EpochedRecording load_csv_recording(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return parse_csv_recording(in);
}

void write_csv_recording(std::ostream& out, const EpochedRecording& recording) {
  out << "# sample_rate_hz=" << format_number(recording.sample_rate_hz) << '\n';
  out << "# channels=";
  for (std::size_t c = 0; c < recording.channel_names.size(); ++c) {
    if (c) out << ',';
    out << recording.channel_names[c];
  }
  out << '\n' << "# epoch_len=" << recording.length() << '\n';
  std::string line;
  for (std::size_t i = 0; i < recording.length(); ++i) {
    line.clear();
    for (std::size_t e = 0; e < recording.num_epochs(); ++e) {
      for (std::size_t c = 0; c < recording.channels(); ++c) {
        if (!line.empty()) line += ',';
        line += format_number(recording.epochs(e, c, i));
      }
    }
    out << line << '\n';
  }
}

void save_csv_recording(const std::string& path, const EpochedRecording& recording) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_csv_recording(out, recording);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

MultichannelSignal average_epochs(const EpochedRecording& recording) {
  const std::size_t epochs = recording.num_epochs();
  if (epochs == 0) throw Error(ErrorCode::ShapeMismatch, "recording has no epochs");
  Tensor<double, 2> mean({recording.channels(), recording.length()});
  for (std::size_t c = 0; c < recording.channels(); ++c) {
    auto row = mean.lane(c);
    for (std::size_t e = 0; e < epochs; ++e) {
      const auto src = recording.epochs.lane(e, c);
      for (std::size_t i = 0; i < row.size(); ++i) row[i] += src[i];
    }
    if (epochs > 1) {
      for (double& v : row) v /= static_cast<double>(epochs);
    }
  }
  return MultichannelSignal(std::move(mean), recording.sample_rate_hz);
}

MultichannelSignal zscore_channels(const MultichannelSignal& signal) {
  Tensor<double, 2> out = signal.samples();
  const double len = static_cast<double>(signal.length());
  for (std::size_t c = 0; c < signal.channels(); ++c) {
    auto row = out.lane(c);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= len;
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean);
    var /= len;
    const double scale = std::max(std::abs(mean), 1.0);
    if (!(std::sqrt(var) > 1e-12 * scale)) {
      throw Error(ErrorCode::DegenerateVariance, "channel " + std::to_string(c) + " is constant");
    }
    const double inv_sd = 1.0 / std::sqrt(var);
    for (double& v : row) v = (v - mean) * inv_sd;
  }
  return MultichannelSignal(std::move(out), signal.sample_rate_hz());
}

void apply_band_mask(std::vector<std::complex<double>>& half_spectrum, std::size_t length, double fs,
                     double lo_hz, double hi_hz) {
  for (std::size_t m = 0; m < half_spectrum.size(); ++m) {
    const double f = static_cast<double>(m) * fs / static_cast<double>(length);
    if (f < lo_hz || f > hi_hz) half_spectrum[m] = {0.0, 0.0};
  }
}

MultichannelSignal brickwall_bandpass(const MultichannelSignal& signal, double lo_hz, double hi_hz) {
  const double fs = signal.sample_rate_hz();
  if (!(lo_hz > 0.0 && lo_hz < hi_hz && hi_hz < 0.5 * fs)) {
    throw Error(ErrorCode::BadConfig, "band must satisfy 0 < lo < hi < fs/2");
  }
  const RealFft fft(signal.length());
  std::vector<std::complex<double>> spec(fft.bins());
  Tensor<double, 2> out({signal.channels(), signal.length()});
  for (std::size_t c = 0; c < signal.channels(); ++c) {
    fft.forward(signal.channel(c), spec);
    apply_band_mask(spec, signal.length(), fs, lo_hz, hi_hz);
    fft.inverse(spec, out.lane(c));
  }
  return MultichannelSignal(std::move(out), fs);
}

MultichannelSignal preprocess_ssvep(const EpochedRecording& recording, double band_lo_hz,
                                    double band_hi_hz) {
  return brickwall_bandpass(zscore_channels(average_epochs(recording)), band_lo_hz, band_hi_hz);
}

Tensor<double, 2> detrend_tf_map(const Tensor<double, 2>& tf_map) {
  const std::size_t rows = tf_map.extent(0);
  const std::size_t bins = tf_map.extent(1);
  if (bins < 5) throw Error(ErrorCode::ShapeMismatch, "need at least 5 frequency bins to detrend");
  if (rows == 0) return tf_map;
  std::vector<double> profile(bins, 0.0);
  for (std::size_t t = 0; t < rows; ++t) {
    const auto row = tf_map.lane(t);
    for (std::size_t b = 0; b < bins; ++b) profile[b] += row[b];
  }
  for (double& v : profile) v /= static_cast<double>(rows);
  std::vector<double> trend(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = b >= 2 ? b - 2 : 0;
    const std::size_t hi = std::min(bins - 1, b + 2);
    double sum = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) sum += profile[i];
    trend[b] = sum / static_cast<double>(hi - lo + 1);
  }
  Tensor<double, 2> out = tf_map;
  for (std::size_t t = 0; t < rows; ++t) {
    auto row = out.lane(t);
    for (std::size_t b = 0; b < bins; ++b) row[b] -= trend[b];
  }
  return out;
}

}  // namespace stvmd

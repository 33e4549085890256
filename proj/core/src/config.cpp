#include "stvmd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stvmd/error.hpp"

namespace stvmd {

void validate_config_fields(const DecompositionConfig& config) {
  const std::size_t n = config.window_len;
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorCode::BadWindow, "window length must be even and >= 2, got " + std::to_string(n));
  }
  if (config.num_modes < 2) {
    throw Error(ErrorCode::BadModeCount, "need a residual plus at least one mode, got K=" +
                                             std::to_string(config.num_modes));
  }
  if (config.hop < 1) throw Error(ErrorCode::BadConfig, "hop must be >= 1");
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) {
    throw Error(ErrorCode::BadConfig, "alpha must be positive");
  }
  if (!(config.tolerance > 0.0) || !std::isfinite(config.tolerance)) {
    throw Error(ErrorCode::BadConfig, "tolerance must be positive");
  }
  if (!(config.dual_step >= 0.0) || !std::isfinite(config.dual_step)) {
    throw Error(ErrorCode::BadConfig, "dual step must be non-negative");
  }
  if (config.max_iters < 1) throw Error(ErrorCode::BadConfig, "max_iters must be >= 1");
  if (config.init == InitKind::Custom) {
    if (config.custom_freqs.size() != config.num_modes) {
      throw Error(ErrorCode::CustomLengthMismatch,
                  "custom init has " + std::to_string(config.custom_freqs.size()) +
                      " entries for K=" + std::to_string(config.num_modes));
    }
    for (double f : config.custom_freqs) {
      if (!(f >= 0.0 && f <= 0.5)) {
        throw Error(ErrorCode::BadConfig, "custom frequencies must lie in [0, 0.5]");
      }
    }
    if (config.custom_freqs[kResidualIndex] != 0.0) {
      throw Error(ErrorCode::BadConfig, "residual frequency must be 0");
    }
  }
}

CheckedConfig validate_config(const DecompositionConfig& config, const MultichannelSignal& signal) {
  validate_config_fields(config);
  const std::size_t len = signal.length();
  if (config.window_len > len) {
    throw Error(ErrorCode::WindowTooLong, "window length " + std::to_string(config.window_len) +
                                              " exceeds signal length " + std::to_string(len));
  }
  if (!signal.all_finite()) {
    throw Error(ErrorCode::NonFinite, "signal contains NaN or Inf");
  }
  CheckedConfig checked;
  checked.config = config;
  checked.signal_length = len;
  checked.channels = signal.channels();
  checked.num_bins = config.window_len / 2 + 1;
  checked.padded_length = len + config.window_len;
  checked.num_windows = (len + config.hop - 1) / config.hop;
  return checked;
}

FrequencyState init_frequencies(const DecompositionConfig& config, std::size_t num_windows) {
  const std::size_t k_modes = config.num_modes;
  std::vector<double> freqs(k_modes, 0.0);
  switch (config.init) {
    case InitKind::UniformHalfBand:
      for (std::size_t k = 0; k < k_modes; ++k) {
        freqs[k] = 0.5 * static_cast<double>(k) / static_cast<double>(k_modes);
      }
      break;
    case InitKind::Zero:
      break;
    case InitKind::Custom:
      if (config.custom_freqs.size() != k_modes) {
        throw Error(ErrorCode::CustomLengthMismatch, "custom init length differs from K");
      }
      freqs = config.custom_freqs;
      break;
  }
  freqs[kResidualIndex] = 0.0;
  if (num_windows == 0) return FrequencyState::make_static(std::move(freqs));
  return FrequencyState::replicate(freqs, num_windows);
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_double(const std::string& text, int line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

std::size_t parse_size(const std::string& text, int line) {
  std::size_t v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad integer '" + text + "'");
  }
  return v;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

std::string format_config(const DecompositionConfig& config) {
  std::ostringstream out;
  out << "num_modes = " << config.num_modes << '\n'
      << "alpha = " << format_double(config.alpha) << '\n'
      << "window_len = " << config.window_len << '\n'
      << "window_kind = \"" << to_string(config.window_kind) << "\"\n"
      << "hop = " << config.hop << '\n'
      << "dual_step = " << format_double(config.dual_step) << '\n'
      << "tolerance = " << format_double(config.tolerance) << '\n'
      << "max_iters = " << config.max_iters << '\n'
      << "init = \"" << to_string(config.init) << "\"\n";
  if (!config.custom_freqs.empty()) {
    out << "custom_freqs = [";
    for (std::size_t i = 0; i < config.custom_freqs.size(); ++i) {
      if (i) out << ", ";
      out << format_double(config.custom_freqs[i]);
    }
    out << "]\n";
  }
  return out.str();
}

DecompositionConfig parse_config(const std::string& text, DecompositionConfig base) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    if (key == "num_modes") {
      base.num_modes = parse_size(value, line_no);
    } else if (key == "alpha") {
      base.alpha = parse_double(value, line_no);
    } else if (key == "window_len") {
      base.window_len = parse_size(value, line_no);
    } else if (key == "window_kind") {
      base.window_kind = parse_window_kind(value);
    } else if (key == "hop") {
      base.hop = parse_size(value, line_no);
    } else if (key == "dual_step") {
      base.dual_step = parse_double(value, line_no);
    } else if (key == "tolerance") {
      base.tolerance = parse_double(value, line_no);
    } else if (key == "max_iters") {
      base.max_iters = parse_size(value, line_no);
    } else if (key == "init") {
      base.init = parse_init_kind(value);
    } else if (key == "custom_freqs") {
      if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected [a, b, ...]");
      }
      base.custom_freqs.clear();
      std::istringstream items(value.substr(1, value.size() - 2));
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (!item.empty()) base.custom_freqs.push_back(parse_double(item, line_no));
      }
    } else {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return base;
}

DecompositionConfig load_config_file(const std::string& path, DecompositionConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

}  // namespace stvmd

#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "stvmd/config.hpp"
#include "stvmd/error.hpp"
#include "stvmd/metrics.hpp"
#include "stvmd/signals.hpp"
#include "stvmd/stvmd.hpp"
#include "stvmd/vmd.hpp"

namespace stvmd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

bool is_known(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

// Sample-rate truth tracks, one column per component.
EpochedRecording truth_tracks(const std::string& name, double fs, std::size_t len,
                              std::vector<std::string> names,
                              const std::function<std::vector<double>(double)>& freqs_at) {
  EpochedRecording rec;
  rec.sample_rate_hz = fs;
  rec.channel_names = std::move(names);
  rec.epochs = Tensor<double, 3>({1, rec.channel_names.size(), len});
  for (std::size_t i = 0; i < len; ++i) {
    const auto f = freqs_at(static_cast<double>(i) / fs);
    if (f.size() != rec.channel_names.size()) throw Error(ErrorCode::ShapeMismatch, "truth track width for " + name);
    for (std::size_t c = 0; c < f.size(); ++c) rec.epochs(0, c, i) = f[c];
  }
  return rec;
}

struct Generated {
  EpochedRecording recording;
  std::optional<EpochedRecording> truth;
};

Generated generate_signal(const std::string& name, double fs, double duration, const NoiseSpec& noise) {
  const auto step = [](double t) { return stepped_fundamental_hz(t); };
  Generated g;
  if (name == "two_tone") {
    g.recording = as_recording(gen_two_tone(fs, duration));
    g.truth = truth_tracks(name, fs, g.recording.length(), {"f1_hz", "f2_hz"},
                           [](double) { return std::vector<double>{20.0, 28.0}; });
  } else if (name == "common_pair") {
    g.recording = as_recording(gen_common_mode_pair(fs, duration), {"ch1", "ch2"});
    g.truth = truth_tracks(name, fs, g.recording.length(), {"ch1_f1_hz", "ch1_f2_hz", "ch2_f1_hz", "ch2_f2_hz"},
                           [](double) { return std::vector<double>{20.0, 36.0, 28.0, 36.0}; });
  } else if (name == "sim1") {
    g.recording = as_recording(gen_sim1(fs, duration, noise));
    g.truth = truth_tracks(name, fs, g.recording.length(), {"f1_hz", "f2_hz"}, [&](double t) {
      return std::vector<double>{step(t), 2.0 * step(t)};
    });
  } else if (name == "sim2") {
    g.recording = as_recording(gen_sim2(fs, duration, noise));
    g.truth = truth_tracks(name, fs, g.recording.length(), {"f1_hz", "f2_hz"}, [](double t) {
      return std::vector<double>{40.0 * t + 10.0, 40.0 * t + 20.0};
    });
  } else if (name == "sim3") {
    g.recording = as_recording(gen_sim3(fs, duration, noise));
    // Derivatives of the phase terms (2 sin(a t) + 10) t and (1.5 cos(a t) + 40) t.
    g.truth = truth_tracks(name, fs, g.recording.length(), {"f1_hz", "f2_hz"}, [](double t) {
      const double a = 0.5 * kPi;
      return std::vector<double>{2.0 * std::sin(a * t) + 10.0 + 2.0 * a * t * std::cos(a * t),
                                 1.5 * std::cos(a * t) + 40.0 - 1.5 * a * t * std::sin(a * t)};
    });
  } else if (name == "align_pair") {
    g.recording = as_recording(gen_alignment_pair(fs, duration, noise), {"ch1", "ch2"});
    g.truth = truth_tracks(name, fs, g.recording.length(), {"ch1_f1_hz", "ch1_f2_hz", "ch2_f1_hz", "ch2_f2_hz"},
                           [&](double t) {
                             const double w = step(t);
                             return std::vector<double>{w, 2.0 * w, w, 3.0 * w};
                           });
  } else if (name == "ssvep_surrogate") {
    g.recording = gen_ssvep_surrogate(fs, duration, noise);
    const double switch_t = 0.5 * duration;
    g.truth = truth_tracks(name, fs, g.recording.length(), {"f1_hz", "f2_hz"}, [&](double t) {
      const double f = t < switch_t ? 10.0 : 13.0;
      return std::vector<double>{f, 2.0 * f};
    });
  } else {
    throw Error(ErrorCode::UnknownSignal, "unknown signal '" + name + "'");
  }
  return g;
}

ModeSet run_solver(const std::string& solver, const MultichannelSignal& signal, const DecompositionConfig& config) {
  if (solver == "vmd" || solver == "mvmd") return vmd_decompose(signal, config);
  if (solver == "stvmd") return stvmd_decompose(signal, config, StvmdVariant::NonDynamic);
  if (solver == "stvmd-dynamic") return stvmd_decompose(signal, config, StvmdVariant::Dynamic);
  throw Error(ErrorCode::BadConfig, "unknown solver '" + solver + "'");
}

// Largest usable even window for a heatmap of `len` samples.
std::size_t heatmap_window(std::size_t requested, std::size_t len) {
  std::size_t n = std::min(requested, len);
  if (n % 2) --n;
  return std::max<std::size_t>(n, 2);
}

void write_heatmaps(const std::string& dir, const std::string& prefix, const MultichannelSignal& signal,
                    const DecompositionConfig& config) {
  const std::size_t n = heatmap_window(config.window_len, signal.length());
  const auto spec = spectrogram(signal, n, config.hop, config.window_kind);
  for (std::size_t c = 0; c < spec.extent(0); ++c) {
    Tensor<double, 2> map({spec.extent(1), spec.extent(2)});
    for (std::size_t t = 0; t < spec.extent(1); ++t) {
      const auto lane = spec.lane(c, t);
      std::copy(lane.begin(), lane.end(), map.lane(t).begin());
    }
    write_pgm(join(dir, prefix + "_ch" + std::to_string(c) + ".pgm"), heatmap_from_magnitudes(map));
  }
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  write_text_file(path, manifest_to_json(manifest));
}

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    log << "error: solver failure: " << e.what() << '\n';
    return kSolver;
  }
}

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t comma = std::min(line.find(',', pos), line.size());
    std::size_t a = pos, b = comma;
    while (a < b && std::isspace(static_cast<unsigned char>(line[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(line[b - 1]))) --b;
    if (a == b) return false;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data() + a, line.data() + b, v);
    if (ec != std::errc{} || ptr != line.data() + b || !std::isfinite(v)) return false;
    out.push_back(v);
    pos = comma + 1;
  }
  return !out.empty();
}

std::string output_line(const OnlineOutput& o, double fs) {
  json j;
  j["index"] = o.index;
  j["warmup"] = o.warmup;
  std::vector<double> hz(o.freqs.size());
  for (std::size_t k = 0; k < hz.size(); ++k) hz[k] = o.freqs[k] * fs;
  j["freqs_hz"] = hz;
  j["power"] = o.window_power;
  if (o.warmup) {
    j["modes"] = nullptr;
  } else {
    json modes = json::array();
    for (std::size_t k = 0; k < o.mode_values.extent(0); ++k) {
      const auto lane = o.mode_values.lane(k);
      modes.push_back(std::vector<double>(lane.begin(), lane.end()));
    }
    j["modes"] = std::move(modes);
  }
  return j.dump();
}

}  // namespace

const char* toolkit_version() { return STVMD_VERSION; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadWindow:
    case ErrorCode::BadModeCount:
    case ErrorCode::BadConfig:
    case ErrorCode::CustomLengthMismatch:
    case ErrorCode::UnknownSignal:
      return kUsage;
    case ErrorCode::WindowTooLong:
    case ErrorCode::NonFinite:
    case ErrorCode::PadTooLarge:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::ParseError:
    case ErrorCode::RaggedEpochs:
    case ErrorCode::DegenerateVariance:
    case ErrorCode::IoError:
      return kData;
    case ErrorCode::ZeroWindowSum:
      return kSolver;
  }
  return kSolver;
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["subcommand"] = m.subcommand;
  j["config"] = format_config(m.config);
  j["input"] = m.input;
  j["solver"] = m.solver;
  j["band_lo_hz"] = optional_number(m.band_lo);
  j["band_hi_hz"] = optional_number(m.band_hi);
  j["fs"] = m.fs;
  j["duration"] = m.duration;
  j["noise"] = optional_number(m.noise);
  j["out"] = m.out;
  j["seed"] = m.seed;
  j["version"] = m.version;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config = parse_config(j.at("config").get<std::string>());
    m.input = j.at("input").get<std::string>();
    m.solver = j.at("solver").get<std::string>();
    m.band_lo = read_optional(j, "band_lo_hz");
    m.band_hi = read_optional(j, "band_hi_hz");
    m.fs = j.at("fs").get<double>();
    m.duration = j.at("duration").get<double>();
    m.noise = read_optional(j, "noise");
    m.out = j.at("out").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
}

std::string truth_path_for(const std::string& csv_path) {
  fs::path p(csv_path);
  return (p.parent_path() / (p.stem().string() + "_truth.csv")).string();
}

int cmd_generate(const GenerateOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    if (!is_known(kSignalNames, options.signal)) {
      throw Error(ErrorCode::UnknownSignal, "unknown signal '" + options.signal + "'");
    }
    const double amplitude = options.noise.value_or(options.signal == "ssvep_surrogate" ? 1.0 : 0.2);
    const auto g = generate_signal(options.signal, options.fs, options.duration, NoiseSpec{amplitude, options.seed});
    const std::string out = options.out.empty() ? options.signal + ".csv" : options.out;
    const auto parent = fs::path(out).parent_path();
    if (!parent.empty()) ensure_dir(parent.string());
    save_csv_recording(out, g.recording);
    if (g.truth) save_csv_recording(truth_path_for(out), *g.truth);

    RunManifest m;
    m.subcommand = "generate";
    m.input = options.signal;
    m.fs = options.fs;
    m.duration = options.duration;
    m.noise = options.noise;
    m.out = out;
    m.seed = options.seed;
    m.version = toolkit_version();
    fs::path mp(out);
    write_manifest((mp.parent_path() / (mp.stem().string() + "_manifest.json")).string(), m);
    log << "wrote " << out << " (" << g.recording.num_epochs() << " epoch(s), " << g.recording.channels()
        << " channel(s), " << g.recording.length() << " samples)\n";
    return static_cast<int>(kOk);
  });
}

int cmd_decompose(const DecomposeOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    if (!is_known(kSolverNames, options.solver)) {
      throw Error(ErrorCode::BadConfig, "unknown solver '" + options.solver + "'");
    }
    if (options.band_lo.has_value() != options.band_hi.has_value()) {
      throw Error(ErrorCode::BadConfig, "--band-lo and --band-hi go together");
    }
    validate_config_fields(options.config);
    const auto rec = load_csv_recording(options.input);
    const MultichannelSignal signal = options.band_lo
                                          ? preprocess_ssvep(rec, *options.band_lo, *options.band_hi)
                                          : average_epochs(rec);
    const double fs = signal.sample_rate_hz();

    const ModeSet modes = run_solver(options.solver, signal, options.config);
    const auto report = make_report(options.solver, signal, modes);

    ensure_dir(options.out_dir);
    const std::size_t K = modes.num_modes();
    const std::size_t C = signal.channels();
    const std::size_t L = signal.length();

    EpochedRecording mode_rec;
    mode_rec.sample_rate_hz = fs;
    mode_rec.epochs = Tensor<double, 3>({1, K * C, L});
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t c = 0; c < C; ++c) {
        mode_rec.channel_names.push_back("mode" + std::to_string(k) + "_" + rec.channel_names[c]);
        const auto src = modes.mode_time.lane(k, c);
        std::copy(src.begin(), src.end(), mode_rec.epochs.lane(0, k * C + c).begin());
      }
    }
    save_csv_recording(join(options.out_dir, "modes.csv"), mode_rec);

    // Static solvers give one row; dynamic ones one row per window.
    EpochedRecording freq_rec;
    const auto& tracks = report.freq_tracks;
    freq_rec.sample_rate_hz = tracks.extent(1) > 1 ? fs / static_cast<double>(modes.hop) : fs;
    freq_rec.epochs = Tensor<double, 3>({1, K, tracks.extent(1)});
    for (std::size_t k = 0; k < K; ++k) {
      freq_rec.channel_names.push_back("mode" + std::to_string(k) + "_hz");
      const auto src = tracks.lane(k);
      std::copy(src.begin(), src.end(), freq_rec.epochs.lane(0, k).begin());
    }
    save_csv_recording(join(options.out_dir, "freqs.csv"), freq_rec);

    write_text_file(join(options.out_dir, "report.json"), report_to_json(report, fs));
    write_text_file(join(options.out_dir, "config.toml"), format_config(options.config));

    write_heatmaps(options.out_dir, "input", signal, options.config);
    for (std::size_t k = 0; k < K; ++k) {
      Tensor<double, 2> mt({C, L});
      for (std::size_t c = 0; c < C; ++c) {
        const auto src = modes.mode_time.lane(k, c);
        std::copy(src.begin(), src.end(), mt.lane(c).begin());
      }
      write_heatmaps(options.out_dir, "mode" + std::to_string(k), MultichannelSignal(std::move(mt), fs),
                     options.config);
    }

    RunManifest m;
    m.subcommand = "decompose";
    m.config = options.config;
    m.input = options.input;
    m.solver = options.solver;
    m.band_lo = options.band_lo;
    m.band_hi = options.band_hi;
    m.out = options.out_dir;
    m.version = toolkit_version();
    write_manifest(join(options.out_dir, "manifest.json"), m);

    log << options.solver << ": " << report.iterations << " iterations, rmse " << report.rmse_overall << '\n';
    if (!report.converged) {
      log << "warning: NotConverged (last change " << report.last_change << ")\n";
    }
    return static_cast<int>(kOk);
  });
}

int cmd_stream(const StreamOptions& options, std::istream& in, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(options.fs > 0.0)) throw Error(ErrorCode::BadConfig, "sample rate must be positive");
    OnlineState state = online_init(options.config, options.online);
    std::string line;
    std::vector<double> row;
    std::size_t rows = 0, malformed = 0, line_no = 0;
    auto emit = [&](const std::vector<OnlineOutput>& outputs) {
      for (const auto& o : outputs) out << output_line(o, options.fs) << '\n';
      out.flush();
    };
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
      ++rows;
      if (!parse_row(line, row)) {
        ++malformed;
        err << "line " << line_no << ": malformed row skipped\n";
        continue;
      }
      if (state.channels != 0 && row.size() != state.channels) {
        ++malformed;
        err << "line " << line_no << ": expected " << state.channels << " values, got " << row.size() << '\n';
        continue;
      }
      emit(online_push(state, row));
    }
    if (state.channels != 0) emit(online_flush(state));
    if (malformed * 10 > rows) {
      err << "error: " << malformed << " of " << rows << " rows malformed\n";
      return static_cast<int>(kData);
    }
    return static_cast<int>(kOk);
  });
}

Table2 compute_table2(std::uint64_t seed) {
  constexpr double fs = 128.0, duration = 8.0, amplitude = 0.2;
  const std::vector<MultichannelSignal> signals{gen_sim1(fs, duration, {amplitude, seed}),
                                                gen_sim2(fs, duration, {amplitude, seed + 1}),
                                                gen_sim3(fs, duration, {amplitude, seed + 2})};
  DecompositionConfig config;
  config.window_len = 64;
  Table2 table;
  table.signals = {"sim1", "sim2", "sim3"};
  table.solvers = {"vmd", "stvmd", "stvmd-dynamic"};
  for (const auto& solver : table.solvers) {
    std::vector<double> row;
    for (const auto& x : signals) row.push_back(reconstruction_rmse(x, run_solver(solver, x, config)).overall);
    double sum = 0.0;
    for (double v : row) sum += v;
    table.average.push_back(sum / static_cast<double>(row.size()));
    table.rmse.push_back(std::move(row));
  }
  return table;
}

Table2Verdict judge_table2(const Table2& table) {
  auto row_of = [&](const std::string& name) {
    const auto it = std::find(table.solvers.begin(), table.solvers.end(), name);
    if (it == table.solvers.end()) throw Error(ErrorCode::ShapeMismatch, "table lacks solver " + name);
    return static_cast<std::size_t>(it - table.solvers.begin());
  };
  const std::size_t v = row_of("vmd"), s = row_of("stvmd"), d = row_of("stvmd-dynamic");
  Table2Verdict verdict{true, table.average[d] <= 0.6 * table.average[v]};
  for (std::size_t j = 0; j < table.signals.size(); ++j) {
    verdict.ordering = verdict.ordering && table.rmse[d][j] < table.rmse[s][j] &&
                       table.rmse[s][j] <= 1.05 * table.rmse[v][j];
  }
  return verdict;
}

int cmd_bench_table2(const BenchOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const auto table = compute_table2(options.seed);
    ensure_dir(options.out_dir);
    write_table2_csv(join(options.out_dir, "table2.csv"), table);
    RunManifest m;
    m.subcommand = "bench-table2";
    m.config.window_len = 64;
    m.input = "sim1,sim2,sim3";
    m.out = options.out_dir;
    m.seed = options.seed;
    m.version = toolkit_version();
    write_manifest(join(options.out_dir, "manifest.json"), m);

    for (std::size_t r = 0; r < table.solvers.size(); ++r) {
      log << table.solvers[r];
      for (double x : table.rmse[r]) log << ' ' << x;
      log << " avg " << table.average[r] << '\n';
    }
    const auto verdict = judge_table2(table);
    log << "ordering (dynamic < non-dynamic <= 1.05 vmd): " << (verdict.ordering ? "PASS" : "FAIL") << '\n';
    log << "margin (avg dynamic <= 0.6 avg vmd): " << (verdict.margin ? "PASS" : "FAIL") << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_replay(const std::string& manifest_path, const std::string& out_override, std::ostream& log) {
  return guarded(log, [&]() -> int {
    const auto m = manifest_from_json(read_text_file(manifest_path));
    const std::string out = out_override.empty() ? m.out : out_override;
    if (m.subcommand == "generate") {
      return cmd_generate({m.input, m.fs, m.duration, m.seed, m.noise, out}, log);
    }
    if (m.subcommand == "decompose") {
      return cmd_decompose({m.input, m.solver, m.config, m.band_lo, m.band_hi, out}, log);
    }
    if (m.subcommand == "bench-table2") return cmd_bench_table2({m.seed, out}, log);
    throw Error(ErrorCode::ParseError, "manifest names unknown subcommand '" + m.subcommand + "'");
  });
}

}  // namespace stvmd::cli

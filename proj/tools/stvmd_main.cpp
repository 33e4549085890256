#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "stvmd/config.hpp"
#include "stvmd/error.hpp"

namespace {

using namespace stvmd;

// Solver flags are collected as optionals so that only the ones given on the
// command line override the config file.
struct SolverFlags {
  std::string config_file;
  std::optional<std::size_t> modes, window_len, hop, max_iters;
  std::optional<double> alpha, dual_step, tol;
  std::optional<std::string> window, init;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "key = value config file")->check(CLI::ExistingFile);
    app.add_option("--modes", modes, "number of modes K (residual included)");
    app.add_option("--alpha", alpha, "bandwidth penalty");
    app.add_option("--window-len", window_len, "window length N (even)");
    app.add_option("--window", window, "hamming | hann | rect");
    app.add_option("--hop", hop, "window hop in samples");
    app.add_option("--dual-step", dual_step, "multiplier step (0 disables)");
    app.add_option("--tol", tol, "convergence tolerance");
    app.add_option("--max-iters", max_iters, "iteration cap");
    app.add_option("--init", init, "uniform | zero");
  }

  DecompositionConfig resolve() const {
    DecompositionConfig c = config_file.empty() ? DecompositionConfig{} : load_config_file(config_file);
    if (modes) c.num_modes = *modes;
    if (alpha) c.alpha = *alpha;
    if (window_len) c.window_len = *window_len;
    if (window) c.window_kind = parse_window_kind(*window);
    if (hop) c.hop = *hop;
    if (dual_step) c.dual_step = *dual_step;
    if (tol) c.tolerance = *tol;
    if (max_iters) c.max_iters = *max_iters;
    if (init) c.init = parse_init_kind(*init);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Short-time variational mode decomposition toolkit"};
  app.set_version_flag("--version", std::string(cli::toolkit_version()));
  app.require_subcommand(1);

  cli::GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "write a test signal as recording CSV");
  generate->add_option("signal", gen.signal, "two_tone | common_pair | sim1 | sim2 | sim3 | align_pair | ssvep_surrogate")
      ->required();
  generate->add_option("--fs", gen.fs, "sample rate in Hz")->capture_default_str();
  generate->add_option("--duration", gen.duration, "seconds")->capture_default_str();
  generate->add_option("--seed", gen.seed, "noise seed")->capture_default_str();
  generate->add_option("--noise", gen.noise, "noise amplitude (0.2, or 1.0 for ssvep_surrogate)");
  generate->add_option("--out", gen.out, "output CSV path");

  cli::DecomposeOptions dec;
  SolverFlags dec_flags;
  auto* decompose = app.add_subcommand("decompose", "decompose a recording CSV");
  decompose->add_option("input", dec.input, "recording CSV")->required();
  decompose->add_option("--solver", dec.solver, "vmd | mvmd | stvmd | stvmd-dynamic")->capture_default_str();
  decompose->add_option("--band-lo", dec.band_lo, "bandpass low edge in Hz (enables SSVEP preprocessing)");
  decompose->add_option("--band-hi", dec.band_hi, "bandpass high edge in Hz");
  decompose->add_option("--out", dec.out_dir, "output directory")->capture_default_str();
  dec_flags.attach(*decompose);

  cli::StreamOptions str;
  SolverFlags str_flags;
  bool cold_start = false;
  auto* stream = app.add_subcommand("stream", "online dynamic STVMD over CSV rows on stdin");
  stream->add_option("--fs", str.fs, "sample rate in Hz")->capture_default_str();
  stream->add_option("--stride", str.online.stride, "decompose every STRIDE samples")->capture_default_str();
  stream->add_flag("--cold-start", cold_start, "restart every block from the initialization");
  str_flags.attach(*stream);

  cli::BenchOptions bench;
  auto* table2 = app.add_subcommand("bench-table2", "RMSE grid of vmd / stvmd / stvmd-dynamic on sims 1-3");
  table2->add_option("--seed", bench.seed, "noise seed")->capture_default_str();
  table2->add_option("--out", bench.out_dir, "output directory")->capture_default_str();

  std::string manifest_path, replay_out;
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "write artifacts here instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kUsage;
  }

  try {
    if (generate->parsed()) return cli::cmd_generate(gen, std::cerr);
    if (decompose->parsed()) {
      dec.config = dec_flags.resolve();
      return cli::cmd_decompose(dec, std::cerr);
    }
    if (stream->parsed()) {
      std::ios::sync_with_stdio(false);
      str.config = str_flags.resolve();
      str.online.warm_start = !cold_start;
      return cli::cmd_stream(str, std::cin, std::cout, std::cerr);
    }
    if (table2->parsed()) return cli::cmd_bench_table2(bench, std::cout);
    if (replay->parsed()) return cli::cmd_replay(manifest_path, replay_out, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code_for(e.code());
  }
  return cli::kUsage;
}

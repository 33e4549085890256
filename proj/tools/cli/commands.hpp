#pragma once

// Subcommands of the `stvmd` tool. Each returns a process exit code and
// reports diagnostics on the given stream, so they can be driven in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/artifacts.hpp"
#include "stvmd/error.hpp"
#include "stvmd/online.hpp"
#include "stvmd/types.hpp"

namespace stvmd::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kSolver = 3 };

inline const std::vector<std::string> kSignalNames{
    "two_tone", "common_pair", "sim1", "sim2", "sim3", "align_pair", "ssvep_surrogate"};
inline const std::vector<std::string> kSolverNames{"vmd", "mvmd", "stvmd", "stvmd-dynamic"};

struct GenerateOptions {
  std::string signal;
  double fs = 128.0;
  double duration = 8.0;
  std::uint64_t seed = 0;
  std::optional<double> noise;  // per-signal default when unset
  std::string out;              // CSV path; empty means "<signal>.csv"
};

struct DecomposeOptions {
  std::string input;
  std::string solver = "stvmd";
  DecompositionConfig config;
  std::optional<double> band_lo;
  std::optional<double> band_hi;
  std::string out_dir = "out";
};

struct StreamOptions {
  DecompositionConfig config;
  double fs = 128.0;
  OnlineOptions online;
};

struct BenchOptions {
  std::uint64_t seed = 0;
  std::string out_dir = "out";
};

/// Reproducibility record stored as manifest.json next to the artifacts.
struct RunManifest {
  std::string subcommand;
  DecompositionConfig config;
  std::string input;   // input CSV path or generator name
  std::string solver;  // decompose only
  std::optional<double> band_lo;
  std::optional<double> band_hi;
  double fs = 0.0;        // generate only
  double duration = 0.0;  // generate only
  std::optional<double> noise;
  std::string out;
  std::uint64_t seed = 0;
  std::string version;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);
const char* toolkit_version();

/// Names of the truth-track file written next to a generated CSV.
std::string truth_path_for(const std::string& csv_path);

int cmd_generate(const GenerateOptions& options, std::ostream& log);
int cmd_decompose(const DecomposeOptions& options, std::ostream& log);
int cmd_stream(const StreamOptions& options, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_bench_table2(const BenchOptions& options, std::ostream& log);
/// Re-executes the run recorded in a manifest; `out_override` redirects
/// the artifacts.
int cmd_replay(const std::string& manifest_path, const std::string& out_override, std::ostream& log);

/// RMSE grid without any file output (shared by the benchmark command and
/// the acceptance suite).
Table2 compute_table2(std::uint64_t seed);

struct Table2Verdict {
  bool ordering = false;  // per signal: dynamic < non-dynamic <= 1.05 * vmd
  bool margin = false;    // average dynamic <= 0.6 * average vmd
};
Table2Verdict judge_table2(const Table2& table);

int exit_code_for(ErrorCode code);

}  // namespace stvmd::cli

#pragma once

// Runs a configured experiment and writes its artifacts. Files are produced
// only after the computation succeeds, so a failed run leaves no partial
// output behind.

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "bernoulli/config.hpp"

namespace bernoulli::experiment {

// Overrides the directory that relative `out` paths are resolved against.
inline constexpr const char* kOutputRootEnv = "BERNOULLI_OUTPUT_ROOT";

struct RunOptions {
  // Accepted iterations whose mesh is written as mesh_iter<k>.txt (OPTIMIZE).
  std::set<int> dump_mesh_iters;
  bool dump_final_mesh = false;
  // Takes precedence over the environment variable when non-empty.
  std::filesystem::path output_root;
};

struct RunResult {
  std::filesystem::path out_dir;
  double initial_error = 0.0;
  double final_error = 0.0;
  int iterations = 0;
  std::string stop_reason;
};

std::filesystem::path output_directory(const config::ExperimentConfig& cfg, const RunOptions& options = {});

RunResult run(const config::ExperimentConfig& cfg, const RunOptions& options = {});

enum class SweepParam { N, CntPair };

SweepParam parse_sweep_param(std::string_view text);
// N: `3..11` or `3,5,8`. cnt_pair: `24:50,48:100`. Throws ConfigError on an
// empty or malformed list.
std::vector<std::string> parse_sweep_values(SweepParam param, std::string_view text);

struct SweepRow {
  std::string value;
  RunResult result;
  std::string status;  // "ok" or the failure message
};

// One OPTIMIZE run per value in <out>/<param>_<value>, then <out>/sweep.csv.
std::vector<SweepRow> sweep(const config::ExperimentConfig& base, SweepParam param,
                            const std::vector<std::string>& values, const RunOptions& options = {});

// `value,initial_error,NoI,final_error,status`
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace bernoulli::experiment

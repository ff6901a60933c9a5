#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "potopt_cli/config.hpp"

namespace potopt::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kConfigError = 1, kNoConvergence = 2 };

struct RunOutput {
  nlohmann::json record;
  std::string csv;
  std::string summary;
  /// Headline numbers for sweep tables.
  double objective = 0.0;
  double constraint_residual = 0.0;
  double duality_gap = 0.0;
  double support_radius = 0.0;
  bool converged = false;
  int exit_code = kOk;
};

/// Runs one experiment (including the h/2 refinement and the optional
/// support check). Throws potopt::Error on invalid input or solver failure.
RunOutput run_experiment(const ExperimentConfig& config);

/// POTOPT_OUT_DIR if set, else the configured directory.
std::filesystem::path output_directory(const ExperimentConfig& config);

/// Writes the requested artifacts; the summary goes to `summary_out` if set.
void write_outputs(const ExperimentConfig& config, const RunOutput& out, std::ostream* summary_out);

/// Shortest round-trip decimal form.
std::string format_number(double x);

struct SweepRow {
  std::string value;
  RunOutput output;
  std::string error;
};

/// Runs the config once per value of `param`, up to `jobs` at a time.
/// Rows come back in the order of `values`.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const std::string& param,
                                const std::vector<std::string>& values, unsigned jobs);

/// Aggregate table of a sweep.
std::string sweep_csv(const std::string& param, const std::vector<SweepRow>& rows);

/// Maps an exception to the process exit code.
int exit_code_for(const std::exception& e);

}  // namespace potopt::cli

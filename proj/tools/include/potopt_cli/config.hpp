#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "potopt/optimize.hpp"

namespace potopt::cli {

/// Flat key -> value view of a config, keys as "section.key".
using KeyValues = std::map<std::string, std::string>;

enum class ExperimentType { Solve, Counterexample };

struct SourceConfig {
  std::string kind;  ///< constant, indicator or delta
  double value = 0.0;
  double radius = 0.0;
  double center = 0.0;
  double mass = 0.0;
  bool operator==(const SourceConfig&) const = default;
};

struct DomainConfig {
  std::string kind;  ///< interval or radial
  double lower = 0.0;
  double upper = 0.0;
  double radius = 0.0;
  int dimension = 1;
  std::size_t nodes = 0;
  bool operator==(const DomainConfig&) const = default;
};

struct ExperimentConfig {
  ExperimentType type = ExperimentType::Solve;
  std::string name;

  std::string objective;   ///< energy, lambda1 or lambda2
  std::string constraint;  ///< lp, inverse_lp or exponential
  double p = 0.0;
  double alpha = 0.0;
  double budget = 1.0;
  DomainConfig domain;
  std::optional<SourceConfig> source;
  std::size_t gap_nodes = 4;

  std::vector<std::size_t> cex_n;
  double cex_j_factor = 0.0;
  double cex_p = 0.5;

  SolverOptions solver;
  bool support_check = false;
  bool refine = true;
  std::string directory = "results";
  std::vector<std::string> artifacts{"csv", "json", "summary"};

  /// Normalized key/value echo; parse_config(to_ini(echo)) reproduces this config.
  KeyValues echo;

  bool operator==(const ExperimentConfig& o) const { return echo == o.echo; }
};

/// Parses INI text. Throws Error(ConfigError) on syntax errors, unknown or
/// missing keys and out-of-range values.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);
ExperimentConfig from_key_values(const KeyValues& kv);

/// Serializes key/values back to INI text.
std::string to_ini(const KeyValues& kv);

/// Keys whose values are numbers and may be swept.
bool is_numeric_key(const std::string& key);

}  // namespace potopt::cli

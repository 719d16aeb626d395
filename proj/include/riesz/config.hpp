#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace riesz {

struct ModelSection {
  int d = 1;
  double s = 0.5;
  int n = 8;
  double beta = 1.0;
};

struct SamplerSection {
  std::uint64_t steps = 100000;
  std::uint64_t burn_in = 10000;
  std::uint64_t thin = 10;
  std::optional<std::uint64_t> seed;
  std::string schedule = "plain";
  double step_size = 1.0;
  int inner_sweeps = 10;
  int every = 10;
  int chains = 1;
};

struct WindowsSection {
  std::vector<double> volumes{2.0};
  std::vector<double> shifts{8.0, 12.0, 16.0};
};

struct OutputsSection {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "jsonl"};
};

struct OracleSection {
  int points_per_axis = 8;
  int panels = 1;
};

struct ExperimentConfig {
  ModelSection model;
  SamplerSection sampler;
  WindowsSection windows;
  OutputsSection outputs;
  OracleSection oracle;
};

/// Parses sectioned key = value text. `source` prefixes diagnostics.
/// Unknown sections or keys, duplicates and malformed values throw ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Domain checks; throws ConfigError naming the field and constraint.
/// `allow_zero_beta` admits the β = 0 reference ensemble (command-line only).
void validate_config(const ExperimentConfig& cfg, bool allow_zero_beta = false);

/// Fully resolved config as a JSON object string.
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace riesz

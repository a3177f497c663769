#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pivotlab/experiments.hpp"

namespace pivotlab {

/// Malformed or out-of-range configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything `run` needs; the schema is in docs/schemas.md. Unknown keys
/// are rejected, missing keys take the defaults below.
struct ExperimentConfig {
  std::string experiment = "entropy";  // entropy | bad-rate | pin-down | pivots | all
  int rank = 8;
  std::int64_t power = 102;
  int block_N = 2;
  std::vector<std::int64_t> alpha_grid{8, 16, 32, 64};
  std::vector<std::int64_t> n_grid{500, 1000, 2000};
  double L_delta = 0.05;
  std::int64_t L_samples = 100'000;
  std::optional<std::int64_t> L;
  std::int64_t trials = 10'000;
  std::uint64_t seed = 20240611;
  int threads = 1;
  double horizon_factor = 4.0;
  double theta = 0.8;
  int bootstrap = 100;
  std::string chain_check = "none";  // none | incremental | full

  std::int64_t pin_down_n = 1000;
  std::int64_t pin_down_alpha = 50;
  std::int64_t pin_down_trials = 1000;

  std::int64_t pivot_blocks = 500;
  std::int64_t pivot_trials = 1000;

  std::string out_dir = "out";

  nlohmann::json to_json() const;
  /// Throws ConfigError on type errors, unknown keys or invalid values.
  static ExperimentConfig from_json(const nlohmann::json& j);
  /// Throws ConfigError naming the first offending field.
  void validate() const;

  AlternatingSpec spec() const;
  LRule L_rule() const;
  SimulationConfig simulation() const;
};

/// Reads and validates; missing or unreadable file and bad JSON are ConfigError.
ExperimentConfig load_config(const std::string& path);

ChainCheck parse_chain_check(const std::string& name);
std::string to_string(ChainCheck c);

}  // namespace pivotlab

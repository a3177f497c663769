#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pivotlab/partitions.hpp"
#include "pivotlab/pivots.hpp"
#include "pivotlab/schottky.hpp"
#include "pivotlab/stats.hpp"

namespace pivotlab {

/// L is the smallest value with empirical P(|g_1| >= L) <= delta / (2 alpha)
/// over `samples` independent theta-increments, unless `fixed` is set.
struct LRule {
  double delta = 0.05;
  std::int64_t samples = 100'000;
  std::optional<std::int64_t> fixed;
};

/// Sorted lengths of `count` theta-increments drawn from a stream reserved
/// for this purpose (independent of every trial stream).
std::vector<std::int64_t> sample_increment_lengths(const AlternatingSpec& spec, std::int64_t count,
                                                   std::uint64_t seed);
std::int64_t choose_L(std::span<const std::int64_t> sorted_lengths, std::int64_t alpha, double delta);
std::int64_t choose_L(const AlternatingSpec& spec, std::int64_t alpha, const LRule& rule, std::uint64_t seed);

struct SimulationConfig {
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  double horizon_factor = 4.0;  // proxy horizon N = ceil(factor * n)
  double theta = 0.8;
  int threads = 1;
  ChainCheck chain_check = ChainCheck::none;
};

struct EntropyGridConfig {
  AlternatingSpec spec;
  std::vector<std::int64_t> n_grid{500, 1000, 2000};
  std::vector<std::int64_t> alpha_grid{8, 16, 32, 64};
  LRule L_rule;
  SimulationConfig sim;
  int bootstrap = 100;
};

/// Entropies in nats, Miller-Madow throughout. total is the subadditive
/// bound H_T + H_D + H_B + H_S on H(P_n).
struct EntropyCell {
  std::int64_t n = 0;
  std::int64_t alpha = 0;
  std::int64_t L = 0;
  std::int64_t K = 0;
  double H_T = 0.0;
  double H_T_bound = 0.0;  // (n / alpha) log(alpha + 1)
  double H_D = 0.0;
  double H_D_bound = 0.0;  // log(L n + 1)
  double H_B = 0.0;
  double H_S = 0.0;
  double total = 0.0;
  double total_std_error = 0.0;
  double residual = 0.0;  // log(pin-down bound) / n
  std::vector<ProportionInterval> bad_fraction;  // k = 0..K
  std::int64_t interior_bad = 0;
  std::int64_t interior_count = 0;
  double max_interior_bad_upper = 0.0;  // max over 1 <= k < K of the Wilson upper bound
  std::vector<double> total_replicates;  // bootstrap totals, resamples shared across cells

  double per_n(double v) const { return v / static_cast<double>(n); }
};

struct EntropyGridReport {
  std::int64_t trials = 0;
  std::int64_t horizon = 0;
  std::vector<EntropyCell> cells;
  PivotGrowthReport pivots;  // over the shared paths, at the full horizon

  const EntropyCell& cell(std::int64_t n, std::int64_t alpha) const;
  /// Bootstrap standard error of total(a) - total(b).
  double difference_std_error(const EntropyCell& a, const EntropyCell& b) const;
};

/// One set of alternating paths of horizon ceil(factor * max n) feeds every
/// (n, alpha) cell. Throws std::invalid_argument if theta * horizon < max n
/// or a grid is empty.
EntropyGridReport entropy_sublinearity_experiment(const EntropyGridConfig& config);

/// Single-cell version with an explicit L; trials must be >= 100.
EntropyCell partition_entropy_report(const AlternatingSpec& spec, std::int64_t n, std::int64_t alpha,
                                     std::int64_t L, const SimulationConfig& sim, int bootstrap = 100);

struct PinDownConfig {
  AlternatingSpec spec;
  std::int64_t n = 1000;
  std::int64_t alpha = 50;
  LRule L_rule;
  SimulationConfig sim;
};

struct PinDownRow {
  std::int64_t trial = 0;
  bool found = false;
  bool reconstruction_ok = false;
  std::uint64_t candidates = 0;
  std::int64_t r_hat = 0;
  std::int64_t true_distance = 0;  // |p_last|
  std::int64_t last_good = 0;
  std::int64_t bad_chains = 0;
};

struct PinDownSummary {
  std::int64_t n = 0;
  std::int64_t alpha = 0;
  std::int64_t L = 0;
  std::int64_t trials = 0;
  std::int64_t found = 0;
  std::int64_t within_bound = 0;
  std::int64_t reconstructed = 0;
  std::uint64_t bound = 0;
  std::uint64_t max_candidates = 0;
  std::vector<PinDownRow> rows;
  std::optional<std::string> first_failure;

  bool passed() const { return found == trials && within_bound == trials && reconstructed == trials; }
};

PinDownSummary pin_down_experiment(const PinDownConfig& config);

/// Criteria 5/6 style run: pivots with the full chain check.
struct FellowTravelConfig {
  AlternatingSpec spec;
  std::int64_t blocks = 500;
  SimulationConfig sim{1000, 1, 4.0, 0.8, 1, ChainCheck::full};
};

PivotGrowthReport fellow_travel_experiment(const FellowTravelConfig& config);

void write_entropy_csv(std::ostream& out, const EntropyGridReport& report);
void write_bad_rate_csv(std::ostream& out, const EntropyGridReport& report);
void write_pin_down_csv(std::ostream& out, const PinDownSummary& summary);
void write_pivot_csv(std::ostream& out, const PivotGrowthReport& report);
nlohmann::json to_json(const EntropyGridReport& report);
nlohmann::json to_json(const PinDownSummary& summary);
nlohmann::json to_json(const PivotGrowthReport& report);

}  // namespace pivotlab

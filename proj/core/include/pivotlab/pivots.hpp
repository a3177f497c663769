#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pivotlab/half_integer.hpp"
#include "pivotlab/schottky.hpp"
#include "pivotlab/stats.hpp"
#include "pivotlab/walk.hpp"
#include "pivotlab/word_tree.hpp"

namespace pivotlab {

/// The points y_i^-, y_i, y_i^+ of an alternating path, stored in one
/// WordTree. Blocks are 1-based; with B blocks, y^- is known up to B and the
/// pivot algorithm can run up to horizon B - 1 (it needs y_{n+1}^-).
class PathGeometry {
 public:
  PathGeometry() = default;
  explicit PathGeometry(const AlternatingPath& path) { build(path); }

  /// Rebuilds in place, reusing the tree's storage.
  void build(const AlternatingPath& path);

  std::int64_t blocks() const { return static_cast<std::int64_t>(y_.size()) - 1; }
  std::int64_t horizon() const { return blocks() > 0 ? blocks() - 1 : 0; }

  TreePoint y_minus(std::int64_t i) const { return y_minus_[static_cast<std::size_t>(i)]; }
  TreePoint y(std::int64_t i) const { return y_[static_cast<std::size_t>(i)]; }
  TreePoint y_plus(std::int64_t i) const { return y_plus_[static_cast<std::size_t>(i)]; }
  /// Theta-walk position W_t = y_t^+, with W_0 = e.
  TreePoint position(std::int64_t t) const { return t == 0 ? tree_.root() : y_plus(t); }

  const WordTree& tree() const { return tree_; }
  WordTree& tree() { return tree_; }

 private:
  WordTree tree_;
  std::vector<TreePoint> y_minus_, y_, y_plus_;  // index 0 unused
};

enum class ChainCheck { none, incremental, full };

struct PivotParams {
  HalfInt C = HalfInt(1);
  HalfInt delta = HalfInt(0);
  HalfInt D = HalfInt(102);
  ChainCheck chain_check = ChainCheck::incremental;

  /// M = 2C + 9 delta.
  HalfInt M() const { return C * 2 + delta * 9; }
  HalfInt chain_C() const { return C * 2 + delta * 4; }
  HalfInt chain_D() const { return D - C * 2 - delta * 3; }
};

/// C and D from the Schottky set, delta = 0 (tree).
PivotParams pivot_params_for(const SchottkySet& S, ChainCheck check = ChainCheck::incremental);

/// Evolving pivotal set P_n. P only shrinks by truncation or grows by the
/// current time, so it is kept as a sorted stack.
class PivotState {
 public:
  explicit PivotState(PivotParams params = {}) : params_(params) {}

  /// Moves from P_{n-1} to P_n with n = this->n() + 1; the geometry must
  /// provide y_{n+1}^-.
  void update(const PathGeometry& g);

  const std::vector<std::int64_t>& pivotal_times() const { return pivots_; }
  std::int64_t n() const { return n_; }
  std::int64_t backtrack_count() const { return backtracks_; }
  std::int64_t chain_violations() const { return chain_violations_; }
  std::int64_t canoe_violations() const { return canoe_violations_; }
  const std::optional<std::string>& first_violation() const { return first_violation_; }
  const PivotParams& params() const { return params_; }

  /// The sequence e, y_{k1}, y_{k2}^-, y_{k2}, ..., y_{kp}, y_{n+1}^-.
  std::vector<TreePoint> chain_points(const PathGeometry& g) const;

 private:
  void check_chain(const PathGeometry& g);
  void record_violation(std::string what);

  PivotParams params_;
  std::vector<std::int64_t> pivots_;
  std::int64_t n_ = 0;
  std::int64_t backtracks_ = 0;
  std::int64_t chain_violations_ = 0;
  std::int64_t canoe_violations_ = 0;
  std::optional<std::string> first_violation_;
};

/// Runs update() for n = 1..horizon.
PivotState run_pivots(const PathGeometry& g, std::int64_t horizon, PivotParams params = {});

struct PivotReport {
  std::vector<std::int64_t> stable_pivots;
  std::int64_t horizon = 0;
  std::int64_t reported_limit = 0;  // floor(theta * horizon)
  HalfInt max_geodesic_deviation;
  HalfInt M_bound;
  std::int64_t deviation_violations = 0;
};

/// Times in P_horizon that are <= theta * horizon. A removed time never
/// re-enters P, so membership in P_horizon means membership in every P_m
/// with time <= m <= horizon. Deviation is measured for y_k^- and y_k
/// against the geodesic [e, W_horizon].
PivotReport stable_pivots(const PathGeometry& g, const PivotState& state, double theta);

/// Pivotal times of an explicit walk by the shadow criterion: k is pivotal
/// at time n if (e, w_h)_{w_k} <= M for all k <= h <= n.
std::vector<std::int64_t> free_group_pivots(const SamplePath& path, HalfInt M);

struct WindowDecayRow {
  std::int64_t window = 0;
  std::int64_t windows = 0;
  std::int64_t empty = 0;
  double probability = 0.0;
};

struct PivotGrowthReport {
  std::int64_t blocks = 0;
  std::int64_t trials = 0;
  MeanEstimate rate;  // #P_N / N
  double stable_rate = 0.0;
  std::map<std::int64_t, std::int64_t> gap_histogram;
  std::vector<WindowDecayRow> no_pivot_windows;
  std::optional<LinearFit> decay_fit;  // log probability against window length
  std::int64_t chain_violations = 0;
  std::int64_t deviation_violations = 0;
  HalfInt max_geodesic_deviation;
  std::int64_t stable_total = 0;
  std::optional<std::string> first_failure;  // reproducer for the first failing trial
};

/// Accumulates per-path pivot statistics; merge() is associative, so
/// trials can be split across threads and combined in trial order.
class PivotGrowthAccumulator {
 public:
  void add(const PivotState& state, const PivotReport& report, std::uint64_t seed, std::int64_t trial);
  void merge(const PivotGrowthAccumulator& other);
  PivotGrowthReport finish(std::int64_t blocks, std::uint64_t seed) const;

 private:
  std::vector<double> rates_;
  std::int64_t stable_total_ = 0;
  std::int64_t stable_range_total_ = 0;
  std::map<std::int64_t, std::int64_t> gaps_;
  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> windows_;  // w -> (windows, empty)
  std::int64_t chain_violations_ = 0;
  std::int64_t deviation_violations_ = 0;
  HalfInt max_dev_;
  std::optional<std::string> first_failure_;
};

/// Counts windows of length w in [1, limit] (w = 2, 4, 8, ... up to limit/2)
/// containing no time of `stable`.
std::vector<WindowDecayRow> no_pivot_windows(const std::vector<std::int64_t>& stable, std::int64_t limit);

/// Parameters default to pivot_params_for(spec.schottky).
PivotGrowthReport pivot_growth_stats(const AlternatingSpec& spec, std::int64_t blocks, std::int64_t trials,
                                     std::uint64_t seed, double theta = 0.8, int threads = 1,
                                     std::optional<PivotParams> params = std::nullopt);

}  // namespace pivotlab

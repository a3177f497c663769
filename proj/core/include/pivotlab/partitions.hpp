#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pivotlab/half_integer.hpp"
#include "pivotlab/pivots.hpp"
#include "pivotlab/run_word.hpp"
#include "pivotlab/schottky.hpp"
#include "pivotlab/walk.hpp"

namespace pivotlab {

/// I_0 = {0}; I_k = (alpha(k-1), alpha k] ∩ [0, n] for 1 <= k <= ceil(n/alpha).
struct IntervalIndex {
  std::int64_t k = 0;
  std::int64_t first = 0;
  std::int64_t last = 0;
  std::int64_t size() const { return last - first + 1; }
};

/// ceil(n / alpha); throws std::invalid_argument if alpha < 1 or n < 0.
std::int64_t interval_count(std::int64_t n, std::int64_t alpha);
std::vector<IntervalIndex> make_intervals(std::int64_t n, std::int64_t alpha);
/// Index k of the interval containing time t (t in [0, n]).
std::int64_t interval_of(std::int64_t t, std::int64_t alpha);

enum class IntervalClass : std::uint8_t { good, bad };

/// increment_lengths[j-1] = d(w_{j-1}, w_j) for j = 1..n; `stable` sorted.
/// I_0 is good, the interval containing n is bad, and I_k in between is good
/// iff it holds a stable pivot and every increment in it has length <= L.
/// Throws std::invalid_argument if alpha < 1 or L < 1.
std::vector<IntervalClass> classify_intervals(std::span<const std::int64_t> increment_lengths,
                                              std::span<const std::int64_t> stable, std::int64_t n,
                                              std::int64_t alpha, std::int64_t L);

/// What partition building needs to know about a walk W_0 = e, W_t = W_{t-1} g_t.
class WalkView {
 public:
  virtual ~WalkView() = default;
  virtual std::int64_t steps() const = 0;
  virtual RunWord increment(std::int64_t j) const = 0;
  virtual std::int64_t increment_length(std::int64_t j) const = 0;
  virtual std::uint64_t increment_fingerprint(std::int64_t j) const = 0;
  /// d(W_s, W_t).
  virtual std::int64_t distance(std::int64_t s, std::int64_t t) const = 0;
  virtual RunWord position(std::int64_t t) const = 0;
  /// Index into S of the Schottky element a_t of block t, or -1.
  virtual std::int32_t schottky_mark(std::int64_t t) const = 0;
};

/// Theta-walk of an alternating path: g_t = w_{t-1} a_t b_t, W_t = y_t^+.
class ThetaWalkView final : public WalkView {
 public:
  /// Caches increments 1..steps; the geometry must cover them.
  ThetaWalkView(const AlternatingPath& path, const PathGeometry& geometry, std::int64_t steps);

  std::int64_t steps() const override { return steps_; }
  RunWord increment(std::int64_t j) const override { return increments_[static_cast<std::size_t>(j - 1)]; }
  std::int64_t increment_length(std::int64_t j) const override { return lengths_[static_cast<std::size_t>(j - 1)]; }
  std::uint64_t increment_fingerprint(std::int64_t j) const override {
    return fingerprints_[static_cast<std::size_t>(j - 1)];
  }
  std::int64_t distance(std::int64_t s, std::int64_t t) const override {
    return geometry_->tree().dist(geometry_->position(s), geometry_->position(t));
  }
  RunWord position(std::int64_t t) const override { return geometry_->tree().runs(geometry_->position(t)); }
  std::int32_t schottky_mark(std::int64_t t) const override { return path_->block(t).a; }
  std::span<const std::int64_t> lengths() const { return lengths_; }

 private:
  const AlternatingPath* path_;
  const PathGeometry* geometry_;
  std::int64_t steps_;
  std::vector<RunWord> increments_;
  std::vector<std::int64_t> lengths_;
  std::vector<std::uint64_t> fingerprints_;
};

/// A walk given by explicit words (tests, small examples).
class ExplicitWalkView final : public WalkView {
 public:
  explicit ExplicitWalkView(const SamplePath& path, std::vector<std::int32_t> marks = {});

  std::int64_t steps() const override { return static_cast<std::int64_t>(increments_.size()); }
  RunWord increment(std::int64_t j) const override { return increments_[static_cast<std::size_t>(j - 1)]; }
  std::int64_t increment_length(std::int64_t j) const override { return increments_[static_cast<std::size_t>(j - 1)].length(); }
  std::uint64_t increment_fingerprint(std::int64_t j) const override { return fingerprint(increments_[static_cast<std::size_t>(j - 1)]); }
  std::int64_t distance(std::int64_t s, std::int64_t t) const override {
    return dist(positions_[static_cast<std::size_t>(s)], positions_[static_cast<std::size_t>(t)]);
  }
  RunWord position(std::int64_t t) const override { return positions_[static_cast<std::size_t>(t)]; }
  std::int32_t schottky_mark(std::int64_t t) const override {
    return marks_.empty() ? -1 : marks_[static_cast<std::size_t>(t - 1)];
  }

 private:
  std::vector<RunWord> increments_;
  std::vector<RunWord> positions_;
  std::vector<std::int32_t> marks_;
};

/// Data recorded for one L-bad interval I_k: the increments g_j for j in
/// J_k = (I_{k-1} ∪ I_k ∪ I_{k+1}) ∩ [1, n].
struct BadBlock {
  std::int64_t k = 0;
  std::int64_t first = 0;
  std::int64_t last = 0;  // empty when first > last
  std::uint64_t fingerprint = 0;
  std::vector<RunWord> increments;  // filled only when recording
};

struct PartitionData {
  std::int64_t n = 0;
  std::int64_t alpha = 1;
  std::int64_t L = 1;
  std::vector<std::int64_t> t;  // t[0] = 0; t[k] first stable pivot in I_k, or -1
  std::vector<IntervalClass> classes;
  std::int64_t good_distance = 0;
  std::vector<BadBlock> bad_blocks;
  std::int32_t final_schottky = -1;  // a_t at the last stable pivot <= n; -1 records e
  bool increments_recorded = false;
};

PartitionData build_partition(const WalkView& walk, std::span<const std::int64_t> stable, std::int64_t n,
                              std::int64_t alpha, std::int64_t L, bool record_increments = true);

/// Points within `radius` of the proxy segment [proxy_lo, proxy_hi] (as
/// prefix lengths of `proxy`), each right-multiplied by `suffix`. Stored
/// implicitly: the set can hold millions of words.
class CandidateSet {
 public:
  /// The singleton {e}.
  CandidateSet() = default;
  CandidateSet(RunWord proxy, std::int64_t lo, std::int64_t hi, std::int64_t radius, int rank, RunWord suffix);

  /// Exact cardinality; throws std::overflow_error beyond 64 bits.
  std::uint64_t size() const;
  bool contains(const RunWord& x) const;
  /// Throws std::length_error if size() > limit.
  std::vector<ReducedWord> enumerate(std::size_t limit) const;

  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  std::int64_t radius() const { return radius_; }
  const RunWord& suffix() const { return suffix_; }

 private:
  RunWord proxy_;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = 0;
  std::int64_t radius_ = 0;
  int rank_ = 1;
  RunWord suffix_;
};

struct PinDownResult {
  CandidateSet candidates;
  bool true_position_found = false;
  std::uint64_t bound = 0;  // ceil(4n/alpha) * #B(2M)
  std::int64_t r_hat = 0;   // reconstructed |p_last|
  std::int64_t last_good = 0;
  std::vector<std::int64_t> chain_lengths;  // d_i of the interior bad chains
  RunWord w_last;
};

/// Rebuilds w_n from the partition and the proxy geodesic [e, proxy].
/// Needs a partition built with recorded increments. Throws
/// std::invalid_argument if the proxy is shorter than the window.
PinDownResult pin_down(const PartitionData& partition, const RunWord& proxy, HalfInt M, int rank,
                       const RunWord* truth = nullptr);

/// p_- W_i = p_+ for every interior bad chain and p_last W_last = W_n.
bool verify_reconstruction(const PartitionData& partition, const WalkView& walk, std::string* failure = nullptr);

/// ceil(4n/alpha) * ball_size(2M, rank).
std::uint64_t pin_down_bound(std::int64_t n, std::int64_t alpha, HalfInt M, int rank);

}  // namespace pivotlab

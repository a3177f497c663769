#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "pivotlab/experiments.hpp"
#include "pivotlab/partitions.hpp"

using namespace pivotlab;

namespace {

ReducedWord pw(int i, std::int64_t p) { return ReducedWord::power(i, p); }

/// n = 8, alpha = 2: W_3 = a^10 and W_5 = a^20, all steps of length <= 5.
SamplePath ladder() { return path_from_increments({pw(1, 5), pw(1, 2), pw(1, 3), pw(1, 5), pw(1, 5), pw(2, 1), pw(2, 1), pw(2, 1)}); }

}  // namespace

TEST(Intervals, LayoutAndIndex) {
  EXPECT_EQ(interval_count(10, 3), 4);
  EXPECT_EQ(interval_count(0, 3), 0);
  EXPECT_THROW(interval_count(10, 0), std::invalid_argument);
  EXPECT_THROW(interval_count(-1, 2), std::invalid_argument);
  const auto iv = make_intervals(10, 3);
  ASSERT_EQ(iv.size(), 5u);
  EXPECT_EQ(iv[0].first, 0);
  EXPECT_EQ(iv[0].last, 0);
  EXPECT_EQ(iv[1].first, 1);
  EXPECT_EQ(iv[1].last, 3);
  EXPECT_EQ(iv[4].first, 10);
  EXPECT_EQ(iv[4].last, 10);
  std::int64_t covered = 0;
  for (const auto& i : iv) {
    covered += i.size();
    for (auto t = i.first; t <= i.last; ++t) EXPECT_EQ(interval_of(t, 3), i.k);
  }
  EXPECT_EQ(covered, 11);
}

TEST(Classify, FirstGoodLastBad) {
  const std::vector<std::int64_t> lengths(12, 1);
  const std::vector<std::int64_t> stable{1, 4, 7, 10, 12};
  const auto cls = classify_intervals(lengths, stable, 12, 3, 5);
  ASSERT_EQ(cls.size(), 5u);
  EXPECT_EQ(cls[0], IntervalClass::good);
  EXPECT_EQ(cls[1], IntervalClass::good);
  EXPECT_EQ(cls[3], IntervalClass::good);
  EXPECT_EQ(cls[4], IntervalClass::bad);
  EXPECT_THROW(classify_intervals(lengths, stable, 12, 3, 0), std::invalid_argument);
}

TEST(Classify, LongStepOrMissingPivotMakesBad) {
  std::vector<std::int64_t> lengths(12, 1);
  lengths[4] = 9;  // step 5 in I_2
  const std::vector<std::int64_t> stable{1, 4, 10};
  const auto cls = classify_intervals(lengths, stable, 12, 3, 5);
  EXPECT_EQ(cls[1], IntervalClass::good);
  EXPECT_EQ(cls[2], IntervalClass::bad);  // long step
  EXPECT_EQ(cls[3], IntervalClass::bad);  // no pivot
}

TEST(BuildPartition, NoStablePivots) {
  const ExplicitWalkView walk(ladder());
  const auto d = build_partition(walk, {}, 8, 2, 5);
  for (std::size_t k = 1; k < d.classes.size(); ++k) EXPECT_EQ(d.classes[k], IntervalClass::bad);
  EXPECT_EQ(d.good_distance, 0);
  EXPECT_EQ(d.final_schottky, -1);
  EXPECT_EQ(d.bad_blocks.size(), 4u);
  EXPECT_EQ(d.bad_blocks[0].first, 1);
  EXPECT_EQ(d.bad_blocks[0].last, 4);
  EXPECT_EQ(d.bad_blocks[3].first, 5);
  EXPECT_EQ(d.bad_blocks[3].last, 8);
}

TEST(BuildPartition, AdjacentGoodPairContributesTreeDistance) {
  const ExplicitWalkView walk(ladder(), {0, 1, 2, 3, 4, 5, 6, 7});
  const std::vector<std::int64_t> stable{3, 5};
  const auto d = build_partition(walk, stable, 8, 2, 5);
  EXPECT_EQ(d.classes[1], IntervalClass::bad);
  EXPECT_EQ(d.classes[2], IntervalClass::good);
  EXPECT_EQ(d.classes[3], IntervalClass::good);
  EXPECT_EQ(d.t[2], 3);
  EXPECT_EQ(d.t[3], 5);
  EXPECT_EQ(d.good_distance, 10);
  EXPECT_EQ(d.final_schottky, 4);
}

TEST(BuildPartition, LoneGoodIntervalContributesNothing) {
  const ExplicitWalkView walk(ladder());
  const std::vector<std::int64_t> stable{3};
  const auto d = build_partition(walk, stable, 8, 2, 5);
  EXPECT_EQ(d.classes[2], IntervalClass::good);
  EXPECT_EQ(d.classes[3], IntervalClass::bad);
  EXPECT_EQ(d.good_distance, 0);
}

TEST(BuildPartition, BadBlockFingerprintsDependOnIncrements) {
  const ExplicitWalkView a(ladder());
  const SamplePath other = path_from_increments({pw(1, 5), pw(1, 2), pw(1, 3), pw(1, 5), pw(1, 5), pw(2, 1), pw(2, 1), pw(3, 1)});
  const ExplicitWalkView b(other);
  const auto da = build_partition(a, {}, 8, 2, 5, false);
  const auto db = build_partition(b, {}, 8, 2, 5, false);
  EXPECT_EQ(da.bad_blocks[0].fingerprint, db.bad_blocks[0].fingerprint);
  EXPECT_NE(da.bad_blocks[3].fingerprint, db.bad_blocks[3].fingerprint);
  EXPECT_TRUE(da.bad_blocks[0].increments.empty());
  EXPECT_THROW(pin_down(da, RunWord{}, HalfInt(2), 3), std::invalid_argument);
}

TEST(PinDown, ZeroStepsGivesIdentity) {
  const ExplicitWalkView walk(path_from_increments({}));
  const auto d = build_partition(walk, {}, 0, 5, 5);
  const RunWord e;
  const PinDownResult r = pin_down(d, RunWord{}, HalfInt(2), 8, &e);
  EXPECT_EQ(r.candidates.size(), 1u);
  EXPECT_TRUE(r.true_position_found);
  EXPECT_EQ(r.candidates.enumerate(10), std::vector<ReducedWord>{ReducedWord{}});
}

TEST(PinDown, BoundValue) {
  EXPECT_EQ(pin_down_bound(1000, 50, HalfInt(2), 8), 80u * ball_size(4, 8));
  EXPECT_EQ(pin_down_bound(1000, 50, HalfInt(2), 8), 80u * 57857u);
}

TEST(PinDown, AlignedTailIsFound) {
  // Steps of x1^3 x2^3; pivots at every time, so everything but the last interval is good.
  std::vector<ReducedWord> inc(20, pw(1, 3) * pw(2, 3));
  const SamplePath path = path_from_increments(inc);
  const ExplicitWalkView walk(path);
  std::vector<std::int64_t> stable;
  for (std::int64_t t = 1; t <= 20; ++t) stable.push_back(t);
  const auto d = build_partition(walk, stable, 20, 4, 6);
  for (std::size_t k = 0; k + 1 < d.classes.size(); ++k) EXPECT_EQ(d.classes[k], IntervalClass::good);
  const RunWord proxy = RunWord::from_word(path.positions.back() * pw(1, 30));
  const RunWord truth = RunWord::from_word(path.positions.back());
  const PinDownResult r = pin_down(d, proxy, HalfInt(2), 2, &truth);
  EXPECT_TRUE(r.true_position_found);
  EXPECT_LE(r.candidates.size(), r.bound);
  EXPECT_EQ(r.r_hat, 13 * 6);  // d(e, W_13), t_4 = 13
  EXPECT_TRUE(verify_reconstruction(d, walk));
}

TEST(CandidateSet, SizeEnumerateAndContainsAgree) {
  std::mt19937_64 rng(61);
  for (int rep = 0; rep < 60; ++rep) {
    const int rank = 2;
    const ReducedWord proxy = oracle::word(oracle::random_reduced(rng, rank, rng() % 7));
    const auto len = static_cast<std::int64_t>(proxy.length());
    const std::int64_t lo = len == 0 ? 0 : static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(len + 1));
    const std::int64_t hi = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(len - lo + 1));
    const std::int64_t radius = static_cast<std::int64_t>(rng() % 3);
    const ReducedWord suffix = oracle::word(oracle::random_reduced(rng, rank, rng() % 3));
    const CandidateSet c(RunWord::from_word(proxy), lo, hi, radius, rank, RunWord::from_word(suffix));
    const auto listed = c.enumerate(100000);
    const std::set<ReducedWord> distinct(listed.begin(), listed.end());
    ASSERT_EQ(distinct.size(), listed.size());
    ASSERT_EQ(c.size(), listed.size());

    // Brute force: x is a candidate iff x suffix^-1 lies within radius of a
    // proxy prefix of length in [lo, hi].
    for (const auto& p : oracle::bfs_ball(rank, static_cast<int>(len + 3))) {
      const ReducedWord x = oracle::word(p) * suffix;
      bool expected = false;
      for (std::int64_t j = lo; j <= hi && !expected; ++j) {
        expected = dist(oracle::word(p), proxy.prefix(static_cast<std::size_t>(j))) <= radius;
      }
      ASSERT_EQ(c.contains(RunWord::from_word(x)), expected) << to_string(x);
      ASSERT_EQ(distinct.contains(x), expected);
    }
  }
}

TEST(CandidateSet, Validation) {
  const RunWord proxy = RunWord::power(1, 5);
  EXPECT_THROW(CandidateSet(proxy, 3, 2, 1, 2, RunWord{}), std::invalid_argument);
  EXPECT_THROW(CandidateSet(proxy, 0, 6, 1, 2, RunWord{}), std::invalid_argument);
  const CandidateSet big(RunWord::power(1, 100), 0, 100, 30, 8, RunWord{});
  EXPECT_THROW(big.size(), std::overflow_error);
  const CandidateSet mid(proxy, 0, 5, 2, 8, RunWord{});
  EXPECT_THROW(mid.enumerate(3), std::length_error);
}

TEST(PinDown, FullPipelineOnCanonicalSpec) {
  PinDownConfig cfg;
  cfg.spec = canonical_alternating_spec(8, 102);
  cfg.n = 200;
  cfg.alpha = 20;
  cfg.L_rule.samples = 20000;
  cfg.sim.trials = 10;
  cfg.sim.seed = 4;
  const PinDownSummary s = pin_down_experiment(cfg);
  EXPECT_TRUE(s.passed()) << s.first_failure.value_or("");
  EXPECT_EQ(s.rows.size(), 10u);
  EXPECT_LE(s.max_candidates, s.bound);
}

TEST(ThetaWalkView, MatchesAlternatingPath) {
  const AlternatingSpec spec = canonical_alternating_spec(8, 102);
  const AlternatingPath path = sample_alternating(spec, 30, 2);
  const PathGeometry g(path);
  const ThetaWalkView view(path, g, 30);
  for (std::int64_t j = 1; j <= 30; ++j) {
    ASSERT_EQ(view.increment(j), path.increment(j));
    ASSERT_EQ(view.position(j).to_word(), path.y_plus(j));
    ASSERT_EQ(view.distance(j - 1, j), view.increment_length(j));
    ASSERT_EQ(view.schottky_mark(j), path.block(j).a);
  }
  EXPECT_THROW(ThetaWalkView(path, g, 31), std::invalid_argument);
}

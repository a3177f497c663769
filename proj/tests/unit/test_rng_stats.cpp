#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "pivotlab/parallel.hpp"
#include "pivotlab/rng.hpp"
#include "pivotlab/stats.hpp"

using namespace pivotlab;

TEST(CounterRng, DrawsArePureFunctionsOfKeyAndCounter) {
  CounterRng a(StreamKey(5).child(3)), b(StreamKey(5).child(3));
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
  EXPECT_EQ(a.draws(), 100u);
  CounterRng c(StreamKey(5).child(4));
  CounterRng d(StreamKey(5).child(3));
  EXPECT_NE(c.next(), d.next());
}

TEST(CounterRng, SiblingStreamsAreDistinct) {
  std::set<std::uint64_t> firsts;
  const StreamKey root(9);
  for (std::uint64_t i = 0; i < 10000; ++i) firsts.insert(CounterRng(root.child(i)).next());
  EXPECT_EQ(firsts.size(), 10000u);
}

TEST(CounterRng, BelowIsUniform) {
  CounterRng rng(StreamKey(1));
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[rng.below(7)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += std::pow(c - n / 7.0, 2) / (n / 7.0);
  EXPECT_LT(chi2, 22.46);  // 6 dof, p = 0.001
}

TEST(CounterRng, UniformRanges) {
  CounterRng rng(StreamKey(2));
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform_open_zero();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Wilson, KnownValues) {
  const auto w = wilson_interval(0, 100);
  EXPECT_EQ(w.estimate, 0.0);
  EXPECT_NEAR(w.lo, 0.0, 1e-12);
  EXPECT_NEAR(w.hi, 0.0370, 1e-3);
  const auto h = wilson_interval(50, 100);
  EXPECT_NEAR(h.lo, 0.4038, 1e-3);
  EXPECT_NEAR(h.hi, 0.5962, 1e-3);
}

TEST(LinearFit, ExactLineAndErrors) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  const std::vector<double> one{1};
  EXPECT_THROW(linear_fit(one, one), std::invalid_argument);
  const std::vector<double> same{2, 2}, ys{1, 3};
  EXPECT_THROW(linear_fit(same, ys), std::invalid_argument);
}

TEST(Bootstrap, MeanAndSpread) {
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i) v.push_back(i % 2);
  const auto m = bootstrap_mean(v, 400, 3);
  EXPECT_NEAR(m.mean, 0.5, 1e-12);
  EXPECT_NEAR(m.std_error, 0.5 / std::sqrt(1000.0), 0.003);
  EXPECT_LT(m.lo, 0.5);
  EXPECT_GT(m.hi, 0.5);
  EXPECT_EQ(bootstrap_mean(v, 400, 3).std_error, m.std_error);
  EXPECT_NEAR(sample_std(v), 0.50025, 1e-4);
}

TEST(Parallel, ChunksCoverRangeAndRethrow) {
  for (int threads : {1, 2, 3, 8}) {
    std::vector<int> hit(100, 0);
    for_each_chunk(100, threads, [&](std::int64_t, std::int64_t first, std::int64_t last) {
      for (auto i = first; i < last; ++i) ++hit[static_cast<std::size_t>(i)];
    });
    for (int h : hit) ASSERT_EQ(h, 1);
  }
  EXPECT_EQ(chunk_count(2, 8), 2);
  EXPECT_THROW(for_each_chunk(10, 2,
                              [](std::int64_t c, std::int64_t, std::int64_t) {
                                if (c == 1) throw std::runtime_error("boom");
                              }),
               std::runtime_error);
}

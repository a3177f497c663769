#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pivotlab/word_tree.hpp"

using namespace pivotlab;

TEST(WordTree, InsertedWordsReadBack) {
  WordTree t;
  std::mt19937_64 rng(31);
  std::vector<std::pair<TreePoint, ReducedWord>> pts;
  for (int i = 0; i < 400; ++i) {
    const ReducedWord w = oracle::word(oracle::random_reduced(rng, 2, rng() % 15));
    const TreePoint p = t.insert(w);
    ASSERT_EQ(t.word(p), w);
    ASSERT_EQ(t.length(p), static_cast<std::int64_t>(w.length()));
    pts.emplace_back(p, w);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i; j < std::min(pts.size(), i + 25); ++j) {
      const auto& [p, x] = pts[i];
      const auto& [q, y] = pts[j];
      ASSERT_EQ(t.dist(p, q), dist(x, y));
      ASSERT_EQ(t.common_prefix(p, q), static_cast<std::int64_t>(common_prefix_length(x, y)));
      ASSERT_EQ(t.between(p, q), x.inverse() * y);
      ASSERT_EQ(t.runs_between(p, q).to_word(), x.inverse() * y);
      ASSERT_EQ(p == q, x == y);  // one normalized point per word
    }
  }
}

TEST(WordTree, WalkWithLongRuns) {
  WordTree t;
  std::mt19937_64 rng(32);
  TreePoint p = t.root();
  ReducedWord truth;
  std::vector<std::pair<TreePoint, ReducedWord>> history{{p, truth}};
  for (int step = 0; step < 300; ++step) {
    const auto idx = static_cast<std::int32_t>(1 + rng() % 3);
    const std::int64_t power = static_cast<std::int64_t>(rng() % 7) - 3;
    p = t.multiply(p, RunWord::power(idx, power));
    truth *= ReducedWord::power(idx, power);
    ASSERT_EQ(t.word(p), truth);
    history.emplace_back(p, truth);
  }
  for (int i = 0; i < 2000; ++i) {
    const auto& a = history[rng() % history.size()];
    const auto& b = history[rng() % history.size()];
    const auto& c = history[rng() % history.size()];
    ASSERT_EQ(t.dist(a.first, b.first), dist(a.second, b.second));
    ASSERT_EQ(t.gromov_product(a.first, b.first, c.first), gromov_product(a.second, b.second, c.second));
  }
}

TEST(WordTree, PrefixAndLastLetter) {
  WordTree t;
  const ReducedWord w = parse_word("aaabBBc");
  const TreePoint p = t.insert(w);
  for (std::int64_t len = 0; len <= t.length(p); ++len) {
    EXPECT_EQ(t.word(t.prefix(p, len)), w.prefix(static_cast<std::size_t>(len)));
  }
  EXPECT_EQ(t.prefix(p, 100), p);
  EXPECT_EQ(t.last_letter(p), Letter::generator(3));
  EXPECT_FALSE(t.last_letter(t.root()).has_value());
}

TEST(WordTree, ClearKeepsOnlyRoot) {
  WordTree t;
  t.insert(parse_word("abc"));
  t.clear();
  EXPECT_EQ(t.node_count(), 1u);
  EXPECT_EQ(t.word(t.insert(parse_word("ab"))), parse_word("ab"));
}

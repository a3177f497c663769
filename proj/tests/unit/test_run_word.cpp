#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pivotlab/run_word.hpp"

using namespace pivotlab;

namespace {

RunWord random_runs(std::mt19937_64& rng, int rank) {
  std::vector<Run> runs;
  const int n = static_cast<int>(rng() % 6);
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::int32_t>(1 + rng() % static_cast<std::uint64_t>(rank));
    runs.push_back(Run{Letter::generator(idx, (rng() & 1) ? 1 : -1), static_cast<std::int64_t>(rng() % 4)});
  }
  return RunWord::reduce(runs);
}

}  // namespace

TEST(RunWord, PowersAreOneRun) {
  const RunWord x = RunWord::power(3, 102);
  EXPECT_EQ(x.runs().size(), 1u);
  EXPECT_EQ(x.length(), 102);
  EXPECT_EQ(x.to_word(), ReducedWord::power(3, 102));
  EXPECT_TRUE((x * x.inverse()).is_identity());
  EXPECT_TRUE(RunWord::power(3, 0).is_identity());
}

TEST(RunWord, RoundTripsThroughReducedWord) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    const ReducedWord w = oracle::word(oracle::random_reduced(rng, 2, rng() % 30));
    const RunWord r = RunWord::from_word(w);
    ASSERT_EQ(r.to_word(), w);
    ASSERT_EQ(r.length(), static_cast<std::int64_t>(w.length()));
    for (std::size_t j = 1; j < r.runs().size(); ++j) {
      ASSERT_NE(r.runs()[j].letter, r.runs()[j - 1].letter);
      ASSERT_FALSE(r.runs()[j].letter.cancels(r.runs()[j - 1].letter));
    }
  }
}

TEST(RunWord, ArithmeticMatchesReducedWord) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 5000; ++i) {
    const RunWord a = random_runs(rng, 2), b = random_runs(rng, 2);
    ASSERT_EQ((a * b).to_word(), a.to_word() * b.to_word());
    ASSERT_EQ(a.inverse().to_word(), a.to_word().inverse());
    ASSERT_EQ(dist(a, b), dist(a.to_word(), b.to_word()));
    ASSERT_EQ(common_prefix_length(a, b),
              static_cast<std::int64_t>(common_prefix_length(a.to_word(), b.to_word())));
    ASSERT_EQ(fingerprint(a) == fingerprint(b), a == b);
  }
}

TEST(RunWord, PushMergesAndCancels) {
  RunWord x = RunWord::power(1, 5);
  x.push(Letter::generator(1), 3);
  EXPECT_EQ(x, RunWord::power(1, 8));
  x.push(Letter::generator(1, -1), 10);
  EXPECT_EQ(x, RunWord::power(1, -2));
  EXPECT_EQ(to_string(x), to_string(ReducedWord::power(1, -2)));
}

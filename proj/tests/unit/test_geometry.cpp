#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pivotlab/geometry.hpp"

using namespace pivotlab;

namespace {

ReducedWord w(const char* s) { return parse_word(s); }
ReducedWord pw(int i, std::int64_t p) { return ReducedWord::power(i, p); }

ChainParams params(std::int64_t C, std::int64_t D, std::int64_t delta = 0) {
  return ChainParams{HalfInt(C), HalfInt(D), HalfInt(delta)};
}

const FreeGroupSpace kF;

}  // namespace

TEST(IsChain, HandExamples) {
  const std::vector<ReducedWord> good{ReducedWord{}, pw(1, 5), pw(1, 5) * pw(2, 5)};
  EXPECT_TRUE(is_chain<FreeGroupSpace>(kF, good, params(0, 5)));
  const std::vector<ReducedWord> short_step{ReducedWord{}, w("a")};
  EXPECT_FALSE(is_chain<FreeGroupSpace>(kF, short_step, params(0, 5)));
  const std::vector<ReducedWord> back{ReducedWord{}, pw(1, 5), ReducedWord{}};
  EXPECT_FALSE(is_chain<FreeGroupSpace>(kF, back, params(0, 5)));
  const std::vector<ReducedWord> one{ReducedWord{}};
  EXPECT_THROW(is_chain<FreeGroupSpace>(kF, one, params(0, 5)), std::invalid_argument);
}

TEST(CheckCanoe, HandExamples) {
  const std::vector<ReducedWord> chain{ReducedWord{}, pw(1, 5), pw(1, 5) * pw(2, 5)};
  const CanoeReport r = check_canoe<FreeGroupSpace>(kF, chain, params(0, 5));
  EXPECT_TRUE(r.gromov_bound_ok);
  EXPECT_TRUE(r.length_bound_ok);
  EXPECT_EQ(r.endpoint_distance, 10);

  const std::vector<ReducedWord> two{w("ab"), pw(3, 7)};
  const CanoeReport t = check_canoe<FreeGroupSpace>(kF, two, params(1, 3));
  EXPECT_TRUE(t.gromov_bound_ok && t.length_bound_ok);
}

TEST(CheckCanoe, PreconditionsEnforced) {
  const std::vector<ReducedWord> chain{ReducedWord{}, pw(1, 5), pw(1, 5) * pw(2, 5)};
  EXPECT_THROW(check_canoe<FreeGroupSpace>(kF, chain, params(3, 5)), PreconditionViolation);  // D < 2C+1
  const std::vector<ReducedWord> back{ReducedWord{}, pw(1, 5), ReducedWord{}};
  EXPECT_THROW(check_canoe<FreeGroupSpace>(kF, back, params(0, 5)), PreconditionViolation);
}

TEST(CheckCanoe, RandomChainSweep) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 2000; ++i) {
    const int C = static_cast<int>(rng() % 3);
    const int D = 2 * C + 1 + static_cast<int>(rng() % 3);
    const auto raw = oracle::random_chain(rng, 2, C, D, 2 + rng() % 8);
    std::vector<ReducedWord> pts;
    for (const auto& p : raw) pts.push_back(oracle::word(p));
    ASSERT_TRUE(is_chain<FreeGroupSpace>(kF, pts, params(C, D)));
    const CanoeReport r = check_canoe<FreeGroupSpace>(kF, pts, params(C, D));
    ASSERT_TRUE(r.gromov_bound_ok);
    ASSERT_TRUE(r.length_bound_ok);
  }
}

TEST(TreeSpace, AgreesWithFreeGroupSpace) {
  WordTree tree;
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    const auto x = oracle::word(oracle::random_reduced(rng, 2, rng() % 10));
    const auto y = oracle::word(oracle::random_reduced(rng, 2, rng() % 10));
    const auto z = oracle::word(oracle::random_reduced(rng, 2, rng() % 10));
    const TreeSpace ts(tree);
    const TreePoint px = tree.insert(x), py = tree.insert(y), pz = tree.insert(z);
    ASSERT_EQ(gromov_product(ts, px, py, pz), gromov_product(kF, x, y, z));
  }
}

TEST(FourPoint, ZeroHyperbolicOnRandomQuadruples) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 5000; ++i) {
    const auto x = oracle::word(oracle::random_reduced(rng, 2, rng() % 12));
    const auto y = oracle::word(oracle::random_reduced(rng, 2, rng() % 12));
    const auto z = oracle::word(oracle::random_reduced(rng, 2, rng() % 12));
    const auto o = oracle::word(oracle::random_reduced(rng, 2, rng() % 12));
    ASSERT_GE(gromov_product(x, y, o), std::min(gromov_product(x, z, o), gromov_product(y, z, o)));
  }
}

TEST(InChainShadow, HandExamples) {
  const ReducedWord e;
  EXPECT_TRUE(in_chain_shadow(kF, pw(1, 5) * pw(2, 5), e, pw(1, 5), HalfInt(1), HalfInt(0)));
  EXPECT_FALSE(in_chain_shadow(kF, w("ab"), w("ab"), pw(1, 5), HalfInt(1), HalfInt(0)));
  EXPECT_FALSE(in_chain_shadow(kF, e, e, pw(1, 5), HalfInt(1), HalfInt(0)));
}

TEST(InChainShadow, WitnessSearchFindsMultiPointChains) {
  const ReducedWord e;
  const ReducedWord y_plus = pw(1, 5);
  // z = a^5 b^5 a^-1: direct two-point test works.
  const ReducedWord z = pw(1, 5) * pw(2, 5);
  const std::vector<ReducedWord> via{pw(1, 5), pw(1, 5) * pw(2, 5)};
  const auto direct = find_chain_shadow_witness(kF, z, e, y_plus, HalfInt(1), HalfInt(0),
                                                std::span<const ReducedWord>(via));
  ASSERT_TRUE(direct.has_value());
  EXPECT_TRUE(direct->empty());
  // z behind y: no witness.
  const auto none = find_chain_shadow_witness(kF, pw(1, -5), e, y_plus, HalfInt(1), HalfInt(0),
                                              std::span<const ReducedWord>(via));
  EXPECT_FALSE(none.has_value());
}

TEST(DistanceToGeodesic, EqualsGromovProduct) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 2000; ++i) {
    const auto a = oracle::word(oracle::random_reduced(rng, 2, rng() % 10));
    const auto x = oracle::word(oracle::random_reduced(rng, 2, rng() % 10));
    const auto y = oracle::word(oracle::random_reduced(rng, 2, rng() % 10));
    const auto d = distance_to_geodesic(a, x, y);
    ASSERT_EQ(HalfInt(d), gromov_product(x, y, a));
    std::int64_t best = -1;
    for (const auto& v : geodesic(x, y)) {
      const auto dv = dist(a, v);
      if (best < 0 || dv < best) best = dv;
    }
    ASSERT_EQ(d, best);
  }
}

TEST(FellowTravelLemma, HandExamples) {
  const ReducedWord e;
  EXPECT_TRUE(check_fellowtravel_lemma(w("a"), e, w("ab"), e, HalfInt(0), HalfInt(0), HalfInt(0)));
  EXPECT_TRUE(check_fellowtravel_lemma(pw(1, 5), e, pw(1, 10), w("a"), HalfInt(0), HalfInt(1), HalfInt(0)));
  EXPECT_THROW(check_fellowtravel_lemma(w("b"), e, pw(1, 10), e, HalfInt(0), HalfInt(1), HalfInt(0)),
               PreconditionViolation);
}

TEST(FellowTravelLemma, RandomSweepWithPreconditionsByConstruction) {
  std::mt19937_64 rng(45);
  for (int i = 0; i < 3000; ++i) {
    const auto x = oracle::word(oracle::random_reduced(rng, 2, rng() % 10));
    const auto y = oracle::word(oracle::random_reduced(rng, 2, rng() % 10));
    const auto path = geodesic(x, y);
    const ReducedWord on = path[rng() % path.size()];
    const ReducedWord a = on * oracle::word(oracle::random_reduced(rng, 2, rng() % 3));
    const ReducedWord g = oracle::word(oracle::random_reduced(rng, 2, rng() % 4));
    const std::int64_t C = distance_to_geodesic(a, x, y);
    const std::int64_t K = std::max(dist(x, g * x), dist(y, g * y));
    ASSERT_TRUE(check_fellowtravel_lemma(a, x, y, g, HalfInt(C), HalfInt(K), HalfInt(0)));
  }
}

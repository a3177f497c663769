#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pivotlab/half_integer.hpp"
#include "pivotlab/measure.hpp"
#include "pivotlab/rng.hpp"
#include "pivotlab/run_word.hpp"
#include "pivotlab/word.hpp"

namespace pivotlab {

struct SchottkySet {
  std::vector<ReducedWord> elements;
  double epsilon = 0.0;
  HalfInt C;
  HalfInt D;

  nlohmann::json to_json() const;
  static SchottkySet from_json(const nlohmann::json& j);
};

/// {x_1^D, ..., x_k^D} with parameters (2/k, 1, D). Throws
/// std::invalid_argument if k < 5 or D < 1.
SchottkySet canonical_schottky(int k, std::int64_t D);

struct SchottkyReport {
  double cond1_worst = 1.0;  // min over pairs of the fraction of s with (x, s y)_e <= C
  double cond2_worst = 1.0;  // same with s^{-1}
  bool cond3_ok = true;      // d(e, s) >= D for every s
  bool passed = true;
  std::int64_t pairs_tested = 0;
  /// "exhaustive up to length L" or "sampled N pairs".
  std::string coverage;
  std::optional<std::pair<ReducedWord, ReducedWord>> worst_pair;
};

/// Checks the three defining conditions on explicit test pairs.
/// Throws std::invalid_argument if S is empty.
SchottkyReport verify_schottky(std::span<const ReducedWord> S, double epsilon, HalfInt C, HalfInt D,
                               std::span<const std::pair<ReducedWord, ReducedWord>> test_points);

/// Result identical to verify_schottky over all pairs of reduced words of
/// length <= max_len in F_rank, computed by reducing x to its first
/// floor(C)+1 letters and y to its first max|s|+floor(C)+1 letters.
SchottkyReport certify_schottky_exhaustive(std::span<const ReducedWord> S, double epsilon, HalfInt C,
                                           HalfInt D, int rank, int max_len);

/// verify_schottky on `pairs` random pairs with lengths uniform in
/// [min_len, max_len].
SchottkyReport certify_schottky_sampled(std::span<const ReducedWord> S, double epsilon, HalfInt C,
                                        HalfInt D, int rank, std::int64_t pairs, int min_len,
                                        int max_len, std::uint64_t seed);

/// All reduced words of F_rank with length <= max_len, shortlex order.
std::vector<ReducedWord> enumerate_ball(int rank, int max_len);

/// Uniform random reduced word of the given length.
ReducedWord random_reduced_word(CounterRng& rng, int rank, std::int64_t length);

/// mu^{*N} = a mu_S^{*2} + (1-a) tau. The decomposition weight is called a
/// (the interval length elsewhere is alpha).
struct AlternatingSpec {
  double kappa_weight = 1.0;
  Measure tau;
  SchottkySet schottky;
  int N = 2;
  int rank = 0;

  nlohmann::json to_json() const;
  static AlternatingSpec from_json(const nlohmann::json& j);
};

/// Throws std::invalid_argument if supp(mu_S^{*2}) is not inside
/// supp(mu^{*N}) or a >= 1; SupportLimitExceeded if mu^{*N} is too large.
AlternatingSpec decompose(const Measure& mu, int N, const SchottkySet& S,
                          std::size_t cap = kDefaultSupportCap);

/// mu uniform on {x_i^{+-D}}, S = canonical_schottky(k, D).
AlternatingSpec canonical_alternating_spec(int k, std::int64_t D, int N = 2);

/// Spec with kappa = delta_e (a = 1) over the given Schottky set.
AlternatingSpec pure_schottky_spec(const SchottkySet& S);

/// Block i (1-based) holds w_{i-1}, a_i, b_i.
struct AlternatingBlock {
  RunWord kappa;
  std::int32_t a = 0;  // index into the Schottky elements
  std::int32_t b = 0;
};

struct AlternatingPath {
  std::vector<AlternatingBlock> blocks;
  std::vector<RunWord> schottky;
  SeedRecord seed;

  std::int64_t size() const { return static_cast<std::int64_t>(blocks.size()); }
  const AlternatingBlock& block(std::int64_t i) const { return blocks[static_cast<std::size_t>(i - 1)]; }
  /// Theta-increment g_i = w_{i-1} a_i b_i.
  RunWord increment(std::int64_t i) const;

  /// Explicit derived points (1-based). Linear in the path length; meant
  /// for tests and small paths.
  ReducedWord y_minus(std::int64_t i) const;
  ReducedWord y(std::int64_t i) const;
  ReducedWord y_plus(std::int64_t i) const;
};

class KappaTruncation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::int64_t kMaxKappaSteps = 1'000'000;

/// Draws blocks 1..n_blocks. Block i uses the stream seed -> trial -> i,
/// so a longer path extends a shorter one with the same seed.
AlternatingPath sample_alternating(const AlternatingSpec& spec, std::int64_t n_blocks,
                                   std::uint64_t seed, std::uint64_t trial = 0);

/// Reusable sampler; identical output to sample_alternating.
class AlternatingSampler {
 public:
  explicit AlternatingSampler(const AlternatingSpec& spec);
  AlternatingPath sample(std::int64_t n_blocks, std::uint64_t seed, std::uint64_t trial) const;
  AlternatingBlock sample_block(StreamKey key) const;
  /// One theta-increment drawn from its own stream, for tail estimates.
  RunWord sample_increment(StreamKey key) const;

 private:
  double a_;
  double log_keep_;  // log(1 - a)
  MeasureSampler tau_;
  std::vector<RunWord> schottky_;
};

}  // namespace pivotlab

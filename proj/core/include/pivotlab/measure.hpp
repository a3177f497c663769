#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pivotlab/rng.hpp"
#include "pivotlab/run_word.hpp"
#include "pivotlab/word.hpp"

namespace pivotlab {

/// Thrown when an exact computation would exceed its support cap; callers
/// are expected to fall back to sampling.
class SupportLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultSupportCap = 1'000'000;

struct Atom {
  ReducedWord word;
  double p = 0.0;
};

/// Finite-support probability measure on a free group. Atoms are kept
/// sorted by word with no duplicates.
class Measure {
 public:
  Measure() = default;

  /// Merges duplicate words. Throws std::invalid_argument if a mass is not
  /// positive and finite, or the total differs from 1 by more than 1e-12.
  static Measure from_atoms(std::vector<Atom> atoms);
  static Measure point_mass(ReducedWord w);
  static Measure uniform(std::span<const ReducedWord> words);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }
  double probability(const ReducedWord& w) const;
  double total_mass() const;

  nlohmann::json to_json() const;
  static Measure from_json(const nlohmann::json& j);

 private:
  std::vector<Atom> atoms_;
};

Measure convolve(const Measure& mu, const Measure& nu, std::size_t cap = kDefaultSupportCap);
/// mu^{*n}; mu^{*0} is the point mass at e.
Measure convolution_power(const Measure& mu, int n, std::size_t cap = kDefaultSupportCap);

/// Inverse-CDF sampler; also caches each atom as a RunWord.
class MeasureSampler {
 public:
  explicit MeasureSampler(const Measure& mu);

  std::size_t sample_index(CounterRng& rng) const;
  const ReducedWord& word(std::size_t i) const { return words_[i]; }
  const RunWord& runs(std::size_t i) const { return runs_[i]; }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<double> cdf_;
  std::vector<ReducedWord> words_;
  std::vector<RunWord> runs_;
};

}  // namespace pivotlab

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pivotlab/measure.hpp"
#include "pivotlab/word.hpp"

namespace pivotlab {

enum class EntropyMethod { exact, plug_in, plug_in_miller_madow };

std::string to_string(EntropyMethod m);

/// Entropy in nats.
struct EntropyEstimate {
  double value = 0.0;
  EntropyMethod method = EntropyMethod::exact;
  std::int64_t sample_count = 0;
  double std_error = 0.0;
};

/// phi(t) = -t log t, with phi(0) = 0.
double phi(double t);

double entropy_of_probabilities(std::span<const double> probs);
EntropyEstimate entropy_exact(const Measure& mu);

/// Plug-in estimate from a count vector (zeros ignored); Miller-Madow adds
/// (K-1)/(2N) with K the number of observed values.
double entropy_from_counts(std::span<const std::int64_t> counts, EntropyMethod method);

/// Empirical entropy of arbitrary 64-bit labels; std_error from
/// `bootstrap` nonparametric resamples (0 disables it).
EntropyEstimate entropy_of_labels(std::span<const std::uint64_t> labels,
                                  EntropyMethod method = EntropyMethod::plug_in_miller_madow,
                                  int bootstrap = 200, std::uint64_t seed = 0);

/// Throws std::invalid_argument on an empty sample.
EntropyEstimate entropy_empirical(std::span<const ReducedWord> samples,
                                  EntropyMethod method = EntropyMethod::plug_in_miller_madow,
                                  int bootstrap = 200, std::uint64_t seed = 0);

/// Labels recoded to 0..K-1 in first-seen order; reusable for bootstrap
/// loops that resample many columns jointly.
struct DenseLabels {
  std::vector<std::uint32_t> ids;
  std::uint32_t distinct = 0;
};
DenseLabels dense_labels(std::span<const std::uint64_t> labels);

/// Entropy of ids[sample[i]] for a resample `sample`; `scratch` must have
/// size >= distinct and be all zero on entry (it is left zeroed).
double entropy_of_resample(const DenseLabels& column, std::span<const std::uint32_t> sample,
                           EntropyMethod method, std::vector<std::int64_t>& scratch);

/// A law on labels 0, 1, 2, ... given by its probability vector.
using DiscreteLaw = std::vector<double>;

/// P(Z = j) proportional to (1-q) q^j, cut where the remaining tail mass
/// drops below `tail_mass`, then renormalised.
DiscreteLaw truncated_geometric(double q, double tail_mass);

struct RestrictedEntropyReport {
  double delta = 0.0;
  double H_Z = 0.0;
  double H_Y = 0.0;          // exact, from the mixture law
  double phi_bound = 0.0;    // phi(1-delta) + delta H(Z) + phi(delta) |U|
  double lemma_bound = 0.0;  // phi(1-delta) + |U| phi(delta) + sum_{x not in U} phi(P(Z=x))
  std::size_t U_size = 0;
  double H_Y_sampled = -1.0;  // Monte Carlo check when trials > 0
};

/// Y = Z on an event E of probability delta independent of Z, and a sentinel
/// label off E. U is the smallest initial segment {0..u-1} of labels whose
/// complement has sum of phi(P(Z=x)) below `tail_epsilon`.
/// Throws std::invalid_argument unless 0 < delta <= 1.
RestrictedEntropyReport restricted_entropy_demo(const DiscreteLaw& z_law, double delta,
                                                std::uint64_t seed = 0, std::int64_t trials = 0,
                                                double tail_epsilon = 1e-3);

}  // namespace pivotlab

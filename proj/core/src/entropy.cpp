#include "pivotlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "pivotlab/rng.hpp"
#include "pivotlab/stats.hpp"

namespace pivotlab {

std::string to_string(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::exact: return "exact";
    case EntropyMethod::plug_in: return "plug_in";
    case EntropyMethod::plug_in_miller_madow: return "plug_in_miller_madow";
  }
  return "unknown";
}

double phi(double t) { return t > 0.0 ? -t * std::log(t) : 0.0; }

double entropy_of_probabilities(std::span<const double> probs) {
  long double h = 0.0L;
  for (double p : probs) {
    if (p > 0.0) h -= static_cast<long double>(p) * std::log(static_cast<long double>(p));
  }
  return static_cast<double>(std::max(0.0L, h));
}

EntropyEstimate entropy_exact(const Measure& mu) {
  std::vector<double> probs;
  probs.reserve(mu.support_size());
  for (const Atom& a : mu.atoms()) probs.push_back(a.p);
  EntropyEstimate e;
  e.value = entropy_of_probabilities(probs);
  e.method = EntropyMethod::exact;
  return e;
}

double entropy_from_counts(std::span<const std::int64_t> counts, EntropyMethod method) {
  std::int64_t n = 0, k = 0;
  double s = 0.0;
  for (std::int64_t c : counts) {
    if (c <= 0) continue;
    n += c;
    ++k;
    s += static_cast<double>(c) * std::log(static_cast<double>(c));
  }
  if (n == 0) return 0.0;
  const double dn = static_cast<double>(n);
  double h = std::log(dn) - s / dn;
  if (method == EntropyMethod::plug_in_miller_madow) h += static_cast<double>(k - 1) / (2.0 * dn);
  return std::max(0.0, h);
}

DenseLabels dense_labels(std::span<const std::uint64_t> labels) {
  DenseLabels out;
  out.ids.reserve(labels.size());
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  index.reserve(labels.size());
  for (std::uint64_t l : labels) {
    const auto [it, inserted] = index.emplace(l, out.distinct);
    if (inserted) ++out.distinct;
    out.ids.push_back(it->second);
  }
  return out;
}

double entropy_of_resample(const DenseLabels& column, std::span<const std::uint32_t> sample,
                           EntropyMethod method, std::vector<std::int64_t>& scratch) {
  if (scratch.size() < column.distinct) scratch.resize(column.distinct, 0);
  std::vector<std::uint32_t> touched;
  touched.reserve(std::min<std::size_t>(sample.size(), column.distinct));
  for (std::uint32_t i : sample) {
    const std::uint32_t id = column.ids[i];
    if (scratch[id]++ == 0) touched.push_back(id);
  }
  const double n = static_cast<double>(sample.size());
  double s = 0.0;
  for (std::uint32_t id : touched) {
    const double c = static_cast<double>(scratch[id]);
    s += c * std::log(c);
    scratch[id] = 0;
  }
  if (sample.empty()) return 0.0;
  double h = std::log(n) - s / n;
  if (method == EntropyMethod::plug_in_miller_madow) {
    h += static_cast<double>(touched.size() - 1) / (2.0 * n);
  }
  return std::max(0.0, h);
}

EntropyEstimate entropy_of_labels(std::span<const std::uint64_t> labels, EntropyMethod method,
                                  int bootstrap, std::uint64_t seed) {
  if (labels.empty()) throw std::invalid_argument("entropy estimate: empty sample");
  if (method == EntropyMethod::exact) {
    throw std::invalid_argument("entropy estimate: exact method needs a law, not samples");
  }
  const DenseLabels column = dense_labels(labels);
  std::vector<std::uint32_t> identity(labels.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<std::uint32_t>(i);
  std::vector<std::int64_t> scratch(column.distinct, 0);
  EntropyEstimate e;
  e.method = method;
  e.sample_count = static_cast<std::int64_t>(labels.size());
  e.value = entropy_of_resample(column, identity, method, scratch);
  if (bootstrap >= 2) {
    CounterRng rng(StreamKey(seed).child(0xe7));
    std::vector<double> reps;
    reps.reserve(static_cast<std::size_t>(bootstrap));
    std::vector<std::uint32_t> sample(labels.size());
    for (int b = 0; b < bootstrap; ++b) {
      for (auto& s : sample) s = static_cast<std::uint32_t>(rng.below(labels.size()));
      reps.push_back(entropy_of_resample(column, sample, method, scratch));
    }
    e.std_error = sample_std(reps);
  }
  return e;
}

EntropyEstimate entropy_empirical(std::span<const ReducedWord> samples, EntropyMethod method,
                                  int bootstrap, std::uint64_t seed) {
  if (samples.empty()) throw std::invalid_argument("entropy_empirical: empty sample");
  // Exact word identity, not a hash: map each distinct word to its own label.
  std::unordered_map<ReducedWord, std::uint64_t, ReducedWordHash> ids;
  std::vector<std::uint64_t> labels;
  labels.reserve(samples.size());
  for (const auto& w : samples) {
    const auto [it, inserted] = ids.emplace(w, ids.size());
    labels.push_back(it->second);
  }
  return entropy_of_labels(labels, method, bootstrap, seed);
}

DiscreteLaw truncated_geometric(double q, double tail_mass) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("truncated_geometric: q must be in (0,1)");
  if (!(tail_mass > 0.0)) throw std::invalid_argument("truncated_geometric: tail mass must be > 0");
  DiscreteLaw law;
  double p = 1.0 - q;
  double tail = q;  // P(Z > j) after pushing label j
  law.push_back(p);
  while (tail >= tail_mass) {
    p *= q;
    tail *= q;
    law.push_back(p);
  }
  long double total = 0.0L;
  for (double x : law) total += x;
  for (double& x : law) x = static_cast<double>(x / total);
  return law;
}

RestrictedEntropyReport restricted_entropy_demo(const DiscreteLaw& z_law, double delta,
                                                std::uint64_t seed, std::int64_t trials,
                                                double tail_epsilon) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("restricted_entropy_demo: delta must lie in (0, 1]");
  }
  if (z_law.empty()) throw std::invalid_argument("restricted_entropy_demo: empty law for Z");
  RestrictedEntropyReport r;
  r.delta = delta;
  r.H_Z = entropy_of_probabilities(z_law);

  const long double d = delta;
  long double h = 0.0L;
  if (delta < 1.0) h -= (1.0L - d) * std::log(1.0L - d);
  for (double p : z_law) {
    const long double m = d * static_cast<long double>(p);
    if (m > 0.0L) h -= m * std::log(m);
  }
  r.H_Y = static_cast<double>(h);

  // U: shortest initial segment with small phi-tail.
  std::vector<double> tail_phi(z_law.size() + 1, 0.0);
  for (std::size_t i = z_law.size(); i-- > 0;) tail_phi[i] = tail_phi[i + 1] + phi(z_law[i]);
  std::size_t u = 0;
  while (u < z_law.size() && tail_phi[u] >= tail_epsilon) ++u;
  r.U_size = std::max<std::size_t>(u, 1);

  const double phi_e = phi(1.0 - delta);
  r.phi_bound = phi_e + delta * r.H_Z + phi(delta) * static_cast<double>(r.U_size);
  r.lemma_bound = phi_e + static_cast<double>(r.U_size) * phi(delta) + tail_phi[r.U_size];

  if (trials > 0) {
    std::vector<double> cdf(z_law.size());
    double c = 0.0;
    for (std::size_t i = 0; i < z_law.size(); ++i) cdf[i] = (c += z_law[i]);
    const StreamKey key = StreamKey(seed).child(0x7e57);
    std::vector<std::uint64_t> labels;
    labels.reserve(static_cast<std::size_t>(trials));
    for (std::int64_t t = 0; t < trials; ++t) {
      CounterRng rng(key.child(static_cast<std::uint64_t>(t)));
      const bool in_e = rng.uniform() < delta;
      const double u01 = rng.uniform() * cdf.back();
      const auto z = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u01) - cdf.begin());
      labels.push_back(in_e ? z + 1 : 0);  // 0 is the sentinel
    }
    r.H_Y_sampled = entropy_of_labels(labels, EntropyMethod::plug_in_miller_madow, 0).value;
  }
  return r;
}

}  // namespace pivotlab

#include "pivotlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace pivotlab {

namespace {

constexpr double kMassTolerance = 1e-12;

void sort_and_merge(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.word < b.word; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (out > 0 && atoms[out - 1].word == atoms[i].word) {
      atoms[out - 1].p += atoms[i].p;
    } else {
      if (out != i) atoms[out] = std::move(atoms[i]);
      ++out;
    }
  }
  atoms.resize(out);
}

}  // namespace

Measure Measure::from_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("Measure: empty support");
  for (const Atom& a : atoms) {
    if (!(a.p > 0.0) || !std::isfinite(a.p)) {
      throw std::invalid_argument("Measure: masses must be positive and finite (word " +
                                  to_string(a.word) + ")");
    }
  }
  sort_and_merge(atoms);
  Measure m;
  m.atoms_ = std::move(atoms);
  const double total = m.total_mass();
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("Measure: masses sum to " + std::to_string(total) + ", not 1");
  }
  return m;
}

Measure Measure::point_mass(ReducedWord w) {
  Measure m;
  m.atoms_.push_back(Atom{std::move(w), 1.0});
  return m;
}

Measure Measure::uniform(std::span<const ReducedWord> words) {
  if (words.empty()) throw std::invalid_argument("Measure::uniform: empty support");
  std::vector<Atom> atoms;
  atoms.reserve(words.size());
  const double p = 1.0 / static_cast<double>(words.size());
  for (const auto& w : words) atoms.push_back(Atom{w, p});
  return from_atoms(std::move(atoms));
}

double Measure::probability(const ReducedWord& w) const {
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), w,
                                   [](const Atom& a, const ReducedWord& x) { return a.word < x; });
  return (it != atoms_.end() && it->word == w) ? it->p : 0.0;
}

double Measure::total_mass() const {
  // Kahan summation keeps large supports within the 1e-12 tolerance.
  double sum = 0.0, carry = 0.0;
  for (const Atom& a : atoms_) {
    const double y = a.p - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

nlohmann::json Measure::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const Atom& a : atoms_) entries.push_back({{"word", to_string(a.word)}, {"p", a.p}});
  return nlohmann::json{{"entries", entries}};
}

Measure Measure::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
    throw std::invalid_argument("Measure JSON: expected {\"entries\": [...]}");
  }
  std::vector<Atom> atoms;
  for (const auto& e : j["entries"]) {
    atoms.push_back(Atom{parse_word(e.at("word").get<std::string>()), e.at("p").get<double>()});
  }
  return from_atoms(std::move(atoms));
}

Measure convolve(const Measure& mu, const Measure& nu, std::size_t cap) {
  std::unordered_map<ReducedWord, double, ReducedWordHash> acc;
  acc.reserve(std::min(cap, mu.support_size() * nu.support_size()));
  for (const Atom& a : mu.atoms()) {
    for (const Atom& b : nu.atoms()) {
      acc[a.word * b.word] += a.p * b.p;
      if (acc.size() > cap) {
        throw SupportLimitExceeded("convolve: support exceeds cap of " + std::to_string(cap));
      }
    }
  }
  std::vector<Atom> atoms;
  atoms.reserve(acc.size());
  for (auto& [w, p] : acc) atoms.push_back(Atom{w, p});
  return Measure::from_atoms(std::move(atoms));
}

Measure convolution_power(const Measure& mu, int n, std::size_t cap) {
  if (n < 0) throw std::invalid_argument("convolution_power: n must be >= 0");
  Measure out = Measure::point_mass(ReducedWord{});
  for (int i = 0; i < n; ++i) out = convolve(out, mu, cap);
  return out;
}

MeasureSampler::MeasureSampler(const Measure& mu) {
  double c = 0.0;
  for (const Atom& a : mu.atoms()) {
    c += a.p;
    cdf_.push_back(c);
    words_.push_back(a.word);
    runs_.push_back(RunWord::from_word(a.word));
  }
  if (cdf_.empty()) throw std::invalid_argument("MeasureSampler: empty measure");
}

std::size_t MeasureSampler::sample_index(CounterRng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

}  // namespace pivotlab

#include "pivotlab/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pivotlab {

nlohmann::json SchottkySet::to_json() const {
  nlohmann::json elems = nlohmann::json::array();
  for (const auto& s : elements) elems.push_back(to_string(s));
  return {{"elements", elems}, {"epsilon", epsilon}, {"C", C.to_double()}, {"D", D.to_double()}};
}

SchottkySet SchottkySet::from_json(const nlohmann::json& j) {
  SchottkySet s;
  for (const auto& e : j.at("elements")) s.elements.push_back(parse_word(e.get<std::string>()));
  s.epsilon = j.at("epsilon").get<double>();
  s.C = HalfInt::from_double(j.at("C").get<double>());
  s.D = HalfInt::from_double(j.at("D").get<double>());
  if (s.elements.empty()) throw std::invalid_argument("SchottkySet JSON: no elements");
  return s;
}

SchottkySet canonical_schottky(int k, std::int64_t D) {
  if (k < 5) throw std::invalid_argument("canonical_schottky: rank must be >= 5");
  if (D < 1) throw std::invalid_argument("canonical_schottky: power D must be >= 1");
  SchottkySet s;
  for (int i = 1; i <= k; ++i) s.elements.push_back(ReducedWord::power(i, D));
  s.epsilon = 2.0 / k;
  s.C = HalfInt(1);
  s.D = HalfInt(D);
  return s;
}

namespace {

bool fraction_ok(double fraction, double epsilon) {
  // (1 - eps) #S is compared on counts; guard against 0.75 vs 0.7499999.
  return fraction >= 1.0 - epsilon - 1e-12;
}

SchottkyReport empty_report(std::span<const ReducedWord> S, HalfInt D) {
  if (S.empty()) throw std::invalid_argument("Schottky verification: empty set");
  SchottkyReport r;
  for (const auto& s : S) {
    if (HalfInt(static_cast<std::int64_t>(s.length())) < D) r.cond3_ok = false;
  }
  return r;
}

void finish(SchottkyReport& r, double epsilon) {
  r.passed = r.cond3_ok && fraction_ok(r.cond1_worst, epsilon) && fraction_ok(r.cond2_worst, epsilon);
}

}  // namespace

SchottkyReport verify_schottky(std::span<const ReducedWord> S, double epsilon, HalfInt C, HalfInt D,
                               std::span<const std::pair<ReducedWord, ReducedWord>> test_points) {
  SchottkyReport r = empty_report(S, D);
  std::vector<ReducedWord> inverses;
  for (const auto& s : S) inverses.push_back(s.inverse());
  const double size = static_cast<double>(S.size());
  const ReducedWord e;
  double worst_seen = 2.0;
  for (const auto& [x, y] : test_points) {
    std::size_t good1 = 0, good2 = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
      if (gromov_product(x, S[i] * y, e) <= C) ++good1;
      if (gromov_product(x, inverses[i] * y, e) <= C) ++good2;
    }
    const double f1 = static_cast<double>(good1) / size;
    const double f2 = static_cast<double>(good2) / size;
    r.cond1_worst = std::min(r.cond1_worst, f1);
    r.cond2_worst = std::min(r.cond2_worst, f2);
    if (std::min(f1, f2) < worst_seen) {
      worst_seen = std::min(f1, f2);
      r.worst_pair = std::make_pair(x, y);
    }
  }
  r.pairs_tested = static_cast<std::int64_t>(test_points.size());
  r.coverage = "explicit " + std::to_string(test_points.size()) + " pairs";
  finish(r, epsilon);
  return r;
}

std::vector<ReducedWord> enumerate_ball(int rank, int max_len) {
  if (rank < 1) throw std::invalid_argument("enumerate_ball: rank must be >= 1");
  std::vector<ReducedWord> out;
  out.emplace_back();
  std::size_t layer_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (int g = 1; g <= rank; ++g) {
        for (int sign : {1, -1}) {
          const Letter l = Letter::generator(g, sign);
          if (!out[i].is_identity() && out[i][out[i].length() - 1].cancels(l)) continue;
          ReducedWord w = out[i];
          w.push(l);
          out.push_back(std::move(w));
        }
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

ReducedWord random_reduced_word(CounterRng& rng, int rank, std::int64_t length) {
  std::vector<Letter> letters;
  letters.reserve(static_cast<std::size_t>(length));
  while (static_cast<std::int64_t>(letters.size()) < length) {
    const auto code = static_cast<std::int32_t>(rng.below(2 * static_cast<std::uint64_t>(rank)));
    const Letter l = Letter::generator(code / 2 + 1, code % 2 == 0 ? 1 : -1);
    if (!letters.empty() && letters.back().cancels(l)) continue;
    letters.push_back(l);
  }
  return ReducedWord::reduce(letters);
}

SchottkyReport certify_schottky_exhaustive(std::span<const ReducedWord> S, double epsilon, HalfInt C,
                                           HalfInt D, int rank, int max_len) {
  SchottkyReport r = empty_report(S, D);
  if (C < HalfInt(0)) throw std::invalid_argument("certify_schottky_exhaustive: C must be >= 0");
  const auto prefix_len = static_cast<std::size_t>(C.floor() + 1);
  std::size_t longest = 0;
  for (const auto& s : S) longest = std::max(longest, s.length());
  const int y_len = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(max_len), longest + prefix_len));

  const auto ys = enumerate_ball(rank, y_len);
  const std::vector<ReducedWord> elements(S.begin(), S.end());
  std::vector<ReducedWord> inverses;
  for (const auto& s : S) inverses.push_back(s.inverse());
  const double size = static_cast<double>(S.size());

  // x has (x, s y)_e > C exactly when x and s y share their first
  // floor(C)+1 letters, so the worst x for a given y is the most common such
  // prefix among the s y. No x of length <= max_len can be that long if
  // prefix_len > max_len.
  std::size_t worst1 = 0, worst2 = 0;
  std::map<ReducedWord, std::size_t> counts;
  auto worst_multiplicity = [&](const std::vector<ReducedWord>& elems, const ReducedWord& y,
                                ReducedWord& best_prefix) {
    counts.clear();
    std::size_t best = 0;
    if (prefix_len > static_cast<std::size_t>(max_len)) return best;
    for (const auto& s : elems) {
      const ReducedWord sy = s * y;
      if (sy.length() < prefix_len) continue;
      const std::size_t c = ++counts[sy.prefix(prefix_len)];
      if (c > best) {
        best = c;
        best_prefix = sy.prefix(prefix_len);
      }
    }
    return best;
  };
  for (const auto& y : ys) {
    ReducedWord p1, p2;
    const std::size_t m1 = worst_multiplicity(elements, y, p1);
    const std::size_t m2 = worst_multiplicity(inverses, y, p2);
    if (m1 > worst1 || m2 > worst2) r.worst_pair = std::make_pair(m1 >= m2 ? p1 : p2, y);
    worst1 = std::max(worst1, m1);
    worst2 = std::max(worst2, m2);
  }
  r.cond1_worst = (size - static_cast<double>(worst1)) / size;
  r.cond2_worst = (size - static_cast<double>(worst2)) / size;
  const double ball = static_cast<double>(ball_size(max_len, rank));
  r.pairs_tested = static_cast<std::int64_t>(std::min(ball * ball, 9.0e18));
  r.coverage = "exhaustive up to length " + std::to_string(max_len);
  finish(r, epsilon);
  return r;
}

SchottkyReport certify_schottky_sampled(std::span<const ReducedWord> S, double epsilon, HalfInt C,
                                        HalfInt D, int rank, std::int64_t pairs, int min_len,
                                        int max_len, std::uint64_t seed) {
  if (min_len < 0 || max_len < min_len) throw std::invalid_argument("certify_schottky_sampled: bad lengths");
  const StreamKey key = StreamKey(seed).child(0x5c07);
  std::vector<std::pair<ReducedWord, ReducedWord>> tests;
  tests.reserve(static_cast<std::size_t>(pairs));
  const auto span = static_cast<std::uint64_t>(max_len - min_len + 1);
  for (std::int64_t i = 0; i < pairs; ++i) {
    CounterRng rng(key.child(static_cast<std::uint64_t>(i)));
    const auto lx = min_len + static_cast<std::int64_t>(rng.below(span));
    const auto ly = min_len + static_cast<std::int64_t>(rng.below(span));
    ReducedWord x = random_reduced_word(rng, rank, lx);
    ReducedWord y = random_reduced_word(rng, rank, ly);
    tests.emplace_back(std::move(x), std::move(y));
  }
  SchottkyReport r = verify_schottky(S, epsilon, C, D, tests);
  r.coverage = "sampled " + std::to_string(pairs) + " pairs";
  return r;
}

nlohmann::json AlternatingSpec::to_json() const {
  return {{"kappa_weight", kappa_weight},
          {"tau", tau.to_json()},
          {"schottky", schottky.to_json()},
          {"N", N},
          {"rank", rank}};
}

AlternatingSpec AlternatingSpec::from_json(const nlohmann::json& j) {
  AlternatingSpec s;
  s.kappa_weight = j.at("kappa_weight").get<double>();
  if (!(s.kappa_weight > 0.0 && s.kappa_weight <= 1.0)) {
    throw std::invalid_argument("AlternatingSpec JSON: kappa_weight must lie in (0, 1]");
  }
  s.tau = Measure::from_json(j.at("tau"));
  s.schottky = SchottkySet::from_json(j.at("schottky"));
  s.N = j.at("N").get<int>();
  s.rank = j.at("rank").get<int>();
  return s;
}

AlternatingSpec decompose(const Measure& mu, int N, const SchottkySet& S, std::size_t cap) {
  if (S.elements.empty()) throw std::invalid_argument("decompose: empty Schottky set");
  const Measure muN = convolution_power(mu, N, cap);
  const Measure muS = Measure::uniform(S.elements);
  const Measure muS2 = convolve(muS, muS, cap);

  double a = 2.0;
  for (const Atom& g : muS2.atoms()) {
    const double p = muN.probability(g.word);
    if (p <= 0.0) {
      throw std::invalid_argument("decompose: " + to_string(g.word) + " is in supp(mu_S^2) but not in supp(mu^N)");
    }
    a = std::min(a, p / g.p);
  }
  if (a >= 1.0 - 1e-12) throw std::invalid_argument("decompose: degenerate weight a = 1 (mu^N = mu_S^2)");

  std::vector<Atom> tau;
  long double total = 0.0L;
  for (const Atom& g : muN.atoms()) {
    const double rest = g.p - a * muS2.probability(g.word);
    if (rest <= 1e-12 * g.p) continue;
    tau.push_back(Atom{g.word, rest / (1.0 - a)});
    total += tau.back().p;
  }
  for (Atom& t : tau) t.p = static_cast<double>(t.p / total);

  AlternatingSpec spec;
  spec.kappa_weight = a;
  spec.tau = Measure::from_atoms(std::move(tau));
  spec.schottky = S;
  spec.N = N;
  std::int32_t rank = 0;
  for (const Atom& g : mu.atoms()) rank = std::max(rank, g.word.max_generator());
  for (const auto& s : S.elements) rank = std::max(rank, s.max_generator());
  spec.rank = rank;
  return spec;
}

AlternatingSpec canonical_alternating_spec(int k, std::int64_t D, int N) {
  const SchottkySet S = canonical_schottky(k, D);
  std::vector<ReducedWord> gens;
  for (int i = 1; i <= k; ++i) {
    gens.push_back(ReducedWord::power(i, D));
    gens.push_back(ReducedWord::power(i, -D));
  }
  return decompose(Measure::uniform(gens), N, S);
}

AlternatingSpec pure_schottky_spec(const SchottkySet& S) {
  AlternatingSpec spec;
  spec.kappa_weight = 1.0;
  spec.tau = Measure::point_mass(ReducedWord{});
  spec.schottky = S;
  spec.N = 2;
  std::int32_t rank = 0;
  for (const auto& s : S.elements) rank = std::max(rank, s.max_generator());
  spec.rank = rank;
  return spec;
}

RunWord AlternatingPath::increment(std::int64_t i) const {
  const AlternatingBlock& b = block(i);
  RunWord g = b.kappa;
  g *= schottky[static_cast<std::size_t>(b.a)];
  g *= schottky[static_cast<std::size_t>(b.b)];
  return g;
}

ReducedWord AlternatingPath::y_minus(std::int64_t i) const {
  RunWord w;
  for (std::int64_t j = 1; j < i; ++j) w *= increment(j);
  w *= block(i).kappa;
  return w.to_word();
}

ReducedWord AlternatingPath::y(std::int64_t i) const {
  return y_minus(i) * schottky[static_cast<std::size_t>(block(i).a)].to_word();
}

ReducedWord AlternatingPath::y_plus(std::int64_t i) const {
  return y(i) * schottky[static_cast<std::size_t>(block(i).b)].to_word();
}

AlternatingSampler::AlternatingSampler(const AlternatingSpec& spec)
    : a_(spec.kappa_weight),
      log_keep_(spec.kappa_weight < 1.0 ? std::log1p(-spec.kappa_weight) : 0.0),
      tau_(spec.tau) {
  if (!(a_ > 0.0 && a_ <= 1.0)) throw std::invalid_argument("AlternatingSampler: a must lie in (0, 1]");
  if (spec.schottky.elements.empty()) throw std::invalid_argument("AlternatingSampler: empty Schottky set");
  for (const auto& s : spec.schottky.elements) schottky_.push_back(RunWord::from_word(s));
}

AlternatingBlock AlternatingSampler::sample_block(StreamKey key) const {
  CounterRng rng(key);
  AlternatingBlock b;
  std::int64_t steps = 0;
  if (a_ < 1.0) {
    const double g = std::floor(std::log(rng.uniform_open_zero()) / log_keep_);
    if (g > static_cast<double>(kMaxKappaSteps)) {
      throw KappaTruncation("kappa: geometric draw exceeds " + std::to_string(kMaxKappaSteps) + " tau-steps");
    }
    steps = static_cast<std::int64_t>(g);
  }
  for (std::int64_t i = 0; i < steps; ++i) b.kappa *= tau_.runs(tau_.sample_index(rng));
  b.a = static_cast<std::int32_t>(rng.below(schottky_.size()));
  b.b = static_cast<std::int32_t>(rng.below(schottky_.size()));
  return b;
}

RunWord AlternatingSampler::sample_increment(StreamKey key) const {
  const AlternatingBlock b = sample_block(key);
  RunWord g = b.kappa;
  g *= schottky_[static_cast<std::size_t>(b.a)];
  g *= schottky_[static_cast<std::size_t>(b.b)];
  return g;
}

AlternatingPath AlternatingSampler::sample(std::int64_t n_blocks, std::uint64_t seed,
                                           std::uint64_t trial) const {
  if (n_blocks < 0) throw std::invalid_argument("sample_alternating: n_blocks must be >= 0");
  AlternatingPath path;
  path.schottky = schottky_;
  path.seed = SeedRecord{seed, trial};
  path.blocks.reserve(static_cast<std::size_t>(n_blocks));
  const StreamKey key = StreamKey(seed).child(trial);
  for (std::int64_t i = 1; i <= n_blocks; ++i) path.blocks.push_back(sample_block(key.child(static_cast<std::uint64_t>(i))));
  return path;
}

AlternatingPath sample_alternating(const AlternatingSpec& spec, std::int64_t n_blocks, std::uint64_t seed,
                                   std::uint64_t trial) {
  return AlternatingSampler(spec).sample(n_blocks, seed, trial);
}

}  // namespace pivotlab

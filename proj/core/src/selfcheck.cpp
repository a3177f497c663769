#include "pivotlab/selfcheck.hpp"

#include <cstdio>
#include <sstream>

#include "pivotlab/experiments.hpp"
#include "pivotlab/geometry.hpp"
#include "pivotlab/rng.hpp"
#include "pivotlab/schottky.hpp"
#include "pivotlab/word.hpp"

namespace pivotlab {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<Letter> scan_reduce(std::vector<Letter> w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i].cancels(w[i + 1])) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return w;
}

std::vector<Letter> random_letters(CounterRng& rng, int rank, std::size_t len) {
  std::vector<Letter> w;
  for (std::size_t i = 0; i < len; ++i) {
    const auto code = static_cast<std::int32_t>(rng.below(2 * static_cast<std::uint64_t>(rank)));
    w.push_back(Letter::generator(code / 2 + 1, code % 2 == 0 ? 1 : -1));
  }
  return w;
}

SelfcheckItem word_oracle(std::uint64_t seed) {
  const StreamKey key = StreamKey(seed).child(1);
  std::int64_t mismatches = 0;
  const int cases = 2000;
  for (int i = 0; i < cases; ++i) {
    CounterRng rng(key.child(static_cast<std::uint64_t>(i)));
    const auto a = random_letters(rng, 3, rng.below(51));
    const auto b = random_letters(rng, 3, rng.below(51));
    const ReducedWord x = reduce(a);
    const ReducedWord y = reduce(b);
    const auto ra = scan_reduce(a);
    if (!std::equal(ra.begin(), ra.end(), x.letters().begin(), x.letters().end())) ++mismatches;
    std::vector<Letter> ab(x.letters().begin(), x.letters().end());
    ab.insert(ab.end(), y.letters().begin(), y.letters().end());
    const auto rab = scan_reduce(ab);
    const ReducedWord xy = multiply(x, y);
    if (!std::equal(rab.begin(), rab.end(), xy.letters().begin(), xy.letters().end())) ++mismatches;
  }
  return {"word-oracle", mismatches == 0, std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches"};
}

SelfcheckItem canoe_sweep(std::uint64_t seed) {
  const StreamKey key = StreamKey(seed).child(2);
  const FreeGroupSpace space;
  const ChainParams p{HalfInt(1), HalfInt(3), HalfInt(0)};
  const int chains = 500;
  std::int64_t violations = 0;
  for (int c = 0; c < chains; ++c) {
    CounterRng rng(key.child(static_cast<std::uint64_t>(c)));
    const auto len = static_cast<std::size_t>(2 + rng.below(9));
    std::vector<ReducedWord> pts{ReducedWord{}};
    ReducedWord step = random_reduced_word(rng, 3, 3 + static_cast<std::int64_t>(rng.below(3)));
    pts.push_back(step);
    while (pts.size() < len + 1) {
      // The next step retraces at most one letter of the previous one.
      const ReducedWord back = step.inverse();
      const auto overlap = static_cast<std::size_t>(rng.below(2));
      ReducedWord next = back.prefix(overlap);
      const std::size_t target = 3 + 2 * overlap + rng.below(2);
      while (next.length() < target) {
        const ReducedWord extra = random_reduced_word(rng, 3, 1);
        const Letter l = extra[0];
        if (next.length() == overlap && overlap < back.length() && l == back[overlap]) continue;
        if (!next.is_identity() && next[next.length() - 1].cancels(l)) continue;
        next.push(l);
      }
      step = next;
      pts.push_back(multiply(pts.back(), step));
    }
    if (!is_chain<FreeGroupSpace>(space, pts, p)) {
      ++violations;
      continue;
    }
    const CanoeReport r = check_canoe<FreeGroupSpace>(space, pts, p);
    if (!r.gromov_bound_ok || !r.length_bound_ok) ++violations;
  }
  return {"canoe-sweep", violations == 0, std::to_string(chains) + " chains, " + std::to_string(violations) + " violations"};
}

SelfcheckItem schottky_certify() {
  const SchottkySet S = canonical_schottky(8, 3);
  const SchottkyReport r = certify_schottky_exhaustive(S.elements, 0.25, HalfInt(1), HalfInt(3), 8, 3);
  return {"schottky-certify", r.passed,
          r.coverage + ", cond1 " + fixed(r.cond1_worst, 4) + ", cond2 " + fixed(r.cond2_worst, 4)};
}

SelfcheckItem fellow_travel(std::uint64_t seed, int threads) {
  FellowTravelConfig cfg;
  cfg.spec = canonical_alternating_spec(8, 102);
  cfg.blocks = 200;
  cfg.sim.trials = 20;
  cfg.sim.seed = seed;
  cfg.sim.threads = threads;
  const PivotGrowthReport r = fellow_travel_experiment(cfg);
  const bool ok = r.chain_violations == 0 && r.deviation_violations == 0;
  return {"pivot-fellow-travel", ok,
          std::to_string(r.trials) + " paths, " + std::to_string(r.stable_total) + " stable pivots, rate " +
              fixed(r.rate.mean) + ", max deviation " + r.max_geodesic_deviation.to_string()};
}

SelfcheckItem pin_down_trial(std::uint64_t seed) {
  PinDownConfig cfg;
  cfg.spec = canonical_alternating_spec(8, 102);
  cfg.n = 200;
  cfg.alpha = 20;
  cfg.L_rule.samples = 10'000;
  cfg.sim.trials = 1;
  cfg.sim.seed = seed;
  const PinDownSummary s = pin_down_experiment(cfg);
  return {"pin-down", s.passed(),
          "n=200 alpha=20 L=" + std::to_string(s.L) + ", candidates " + std::to_string(s.max_candidates) + " <= " +
              std::to_string(s.bound)};
}

SelfcheckItem entropy_grid(std::uint64_t seed, int threads) {
  EntropyGridConfig cfg;
  cfg.spec = canonical_alternating_spec(8, 102);
  cfg.n_grid = {200};
  cfg.alpha_grid = {20};
  cfg.L_rule.samples = 10'000;
  cfg.sim.trials = 200;
  cfg.sim.seed = seed;
  cfg.sim.threads = threads;
  cfg.bootstrap = 20;
  const EntropyGridReport r = entropy_sublinearity_experiment(cfg);
  const EntropyCell& c = r.cells.front();
  const bool ok = c.H_T <= c.H_T_bound && c.H_D <= c.H_D_bound;
  return {"entropy-grid", ok,
          "H_T " + fixed(c.H_T) + " <= " + fixed(c.H_T_bound) + ", H_D " + fixed(c.H_D) + " <= " + fixed(c.H_D_bound) +
              ", total " + fixed(c.total) + " +- " + fixed(c.total_std_error)};
}

}  // namespace

bool SelfcheckReport::passed() const {
  for (const auto& item : items) {
    if (!item.passed) return false;
  }
  return true;
}

std::string SelfcheckReport::text() const {
  std::ostringstream os;
  os << "pivotlab selfcheck seed=" << seed << '\n';
  for (const auto& item : items) {
    os << item.name << ": " << (item.passed ? "PASS" : "FAIL") << " (" << item.detail << ")\n";
  }
  os << "overall: " << (passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

SelfcheckReport selfcheck(std::uint64_t seed, int threads) {
  SelfcheckReport r;
  r.seed = seed;
  r.items.push_back(word_oracle(seed));
  r.items.push_back(canoe_sweep(seed));
  r.items.push_back(schottky_certify());
  r.items.push_back(fellow_travel(seed, threads));
  r.items.push_back(pin_down_trial(seed));
  r.items.push_back(entropy_grid(seed, threads));
  return r;
}

}  // namespace pivotlab

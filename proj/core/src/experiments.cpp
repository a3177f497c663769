#include "pivotlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pivotlab/entropy.hpp"
#include "pivotlab/parallel.hpp"
#include "pivotlab/rng.hpp"

namespace pivotlab {

namespace {

// Stream indices under the master seed that trial indices never reach.
constexpr std::uint64_t kIncrementStream = 0xffff'ffff'ffff'ff01ULL;
constexpr std::uint64_t kBootstrapStream = 0xffff'ffff'ffff'ff02ULL;

std::int64_t horizon_for(std::int64_t n, double factor) {
  return static_cast<std::int64_t>(std::ceil(factor * static_cast<double>(n)));
}

void check_sim(const SimulationConfig& sim) {
  if (sim.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(sim.theta > 0.0 && sim.theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  if (!(sim.horizon_factor >= 1.0)) throw std::invalid_argument("horizon factor must be >= 1");
  if (sim.threads < 1) throw std::invalid_argument("threads must be >= 1");
}

std::string reproducer(std::uint64_t seed, std::int64_t trial, std::int64_t n, std::int64_t alpha, std::int64_t L,
                       std::int64_t horizon) {
  std::ostringstream os;
  os << "seed=" << seed << " trial=" << trial << " n=" << n << " alpha=" << alpha << " L=" << L
     << " horizon=" << horizon;
  return os.str();
}

/// Columns of one (n, alpha) cell, stored column-major over trials.
struct CellColumns {
  std::int64_t n = 0;
  std::int64_t alpha = 0;
  std::int64_t L = 0;
  std::int64_t K = 0;
  std::vector<std::uint64_t> values;  // (2K + 2) columns: t_1..t_K, Y_1..Y_K, D, S

  std::size_t width() const { return static_cast<std::size_t>(2 * K + 2); }
  std::uint64_t& at(std::size_t col, std::int64_t trial, std::int64_t trials) {
    return values[col * static_cast<std::size_t>(trials) + static_cast<std::size_t>(trial)];
  }
};

enum class Component { T, B, D, S };

struct LabelledColumn {
  Component component;
  DenseLabels labels;
};

double column_entropy(const DenseLabels& col, std::vector<std::int64_t>& scratch) {
  std::fill(scratch.begin(), scratch.begin() + col.distinct, 0);
  for (std::uint32_t id : col.ids) ++scratch[id];
  return entropy_from_counts(std::span<const std::int64_t>(scratch.data(), col.distinct),
                             EntropyMethod::plug_in_miller_madow);
}

}  // namespace

std::vector<std::int64_t> sample_increment_lengths(const AlternatingSpec& spec, std::int64_t count,
                                                   std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("L rule needs at least one sample");
  const AlternatingSampler sampler(spec);
  const StreamKey base = StreamKey(seed).child(kIncrementStream);
  std::vector<std::int64_t> out(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = sampler.sample_increment(base.child(static_cast<std::uint64_t>(i))).length();
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t choose_L(std::span<const std::int64_t> sorted, std::int64_t alpha, double delta) {
  if (sorted.empty()) throw std::invalid_argument("choose_L: no samples");
  if (alpha < 1) throw std::invalid_argument("interval length alpha must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("L rule delta must lie in (0, 1]");
  const auto S = static_cast<double>(sorted.size());
  const auto allowed = static_cast<std::size_t>(std::floor(delta / (2.0 * static_cast<double>(alpha)) * S));
  if (allowed >= sorted.size()) return 1;
  return std::max<std::int64_t>(1, sorted[sorted.size() - 1 - allowed] + 1);
}

std::int64_t choose_L(const AlternatingSpec& spec, std::int64_t alpha, const LRule& rule, std::uint64_t seed) {
  if (rule.fixed) {
    if (*rule.fixed < 1) throw std::invalid_argument("length threshold L must be >= 1");
    return *rule.fixed;
  }
  const auto lengths = sample_increment_lengths(spec, rule.samples, seed);
  return choose_L(lengths, alpha, rule.delta);
}

const EntropyCell& EntropyGridReport::cell(std::int64_t n, std::int64_t alpha) const {
  for (const auto& c : cells) {
    if (c.n == n && c.alpha == alpha) return c;
  }
  throw std::out_of_range("no grid cell for n=" + std::to_string(n) + " alpha=" + std::to_string(alpha));
}

double EntropyGridReport::difference_std_error(const EntropyCell& a, const EntropyCell& b) const {
  const std::size_t m = std::min(a.total_replicates.size(), b.total_replicates.size());
  if (m < 2) return 0.0;
  std::vector<double> diff(m);
  for (std::size_t i = 0; i < m; ++i) diff[i] = a.total_replicates[i] - b.total_replicates[i];
  return sample_std(diff);
}

EntropyGridReport entropy_sublinearity_experiment(const EntropyGridConfig& config) {
  const SimulationConfig& sim = config.sim;
  check_sim(sim);
  if (config.n_grid.empty() || config.alpha_grid.empty()) throw std::invalid_argument("entropy grid is empty");
  for (auto n : config.n_grid) {
    if (n < 1) throw std::invalid_argument("grid n must be >= 1");
  }
  for (auto a : config.alpha_grid) {
    if (a < 1) throw std::invalid_argument("interval length alpha must be >= 1");
  }
  const std::int64_t n_max = *std::max_element(config.n_grid.begin(), config.n_grid.end());
  const std::int64_t H = horizon_for(n_max, sim.horizon_factor);
  if (static_cast<std::int64_t>(std::floor(sim.theta * static_cast<double>(H))) < n_max) {
    throw std::invalid_argument("theta * horizon must reach the largest n");
  }

  std::vector<std::int64_t> Ls;
  std::vector<std::int64_t> lengths;
  if (!config.L_rule.fixed) lengths = sample_increment_lengths(config.spec, config.L_rule.samples, sim.seed);
  for (auto a : config.alpha_grid) {
    Ls.push_back(config.L_rule.fixed ? choose_L(config.spec, a, config.L_rule, sim.seed)
                                     : choose_L(lengths, a, config.L_rule.delta));
  }

  const std::int64_t trials = sim.trials;
  std::vector<CellColumns> cols;
  for (auto n : config.n_grid) {
    for (std::size_t ai = 0; ai < config.alpha_grid.size(); ++ai) {
      CellColumns c;
      c.n = n;
      c.alpha = config.alpha_grid[ai];
      c.L = Ls[ai];
      c.K = interval_count(n, c.alpha);
      c.values.assign(c.width() * static_cast<std::size_t>(trials), 0);
      cols.push_back(std::move(c));
    }
  }

  const PivotParams params = pivot_params_for(config.spec.schottky, sim.chain_check);
  const AlternatingSampler sampler(config.spec);
  std::vector<PivotGrowthAccumulator> parts(static_cast<std::size_t>(chunk_count(trials, sim.threads)));
  for_each_chunk(trials, sim.threads, [&](std::int64_t chunk, std::int64_t first, std::int64_t last) {
    PathGeometry g;
    for (std::int64_t trial = first; trial < last; ++trial) {
      const AlternatingPath path = sampler.sample(H + 1, sim.seed, static_cast<std::uint64_t>(trial));
      g.build(path);
      const PivotState state = run_pivots(g, H, params);
      const PivotReport rep = stable_pivots(g, state, sim.theta);
      parts[static_cast<std::size_t>(chunk)].add(state, rep, sim.seed, trial);
      const ThetaWalkView view(path, g, n_max);
      for (auto& c : cols) {
        const PartitionData d = build_partition(view, rep.stable_pivots, c.n, c.alpha, c.L, false);
        const auto K = static_cast<std::size_t>(c.K);
        for (std::size_t k = 1; k <= K; ++k) c.at(k - 1, trial, trials) = static_cast<std::uint64_t>(d.t[k] + 1);
        for (const BadBlock& b : d.bad_blocks) c.at(K + static_cast<std::size_t>(b.k) - 1, trial, trials) = b.fingerprint;
        c.at(2 * K, trial, trials) = static_cast<std::uint64_t>(d.good_distance);
        c.at(2 * K + 1, trial, trials) = static_cast<std::uint64_t>(d.final_schottky + 1);
      }
    }
  });
  for (std::size_t i = 1; i < parts.size(); ++i) parts[0].merge(parts[i]);

  EntropyGridReport report;
  report.trials = trials;
  report.horizon = H;
  report.pivots = parts[0].finish(H, sim.seed);

  const HalfInt M = params.M();
  std::vector<std::vector<LabelledColumn>> labelled(cols.size());
  std::uint32_t max_distinct = 1;
  for (std::size_t ci = 0; ci < cols.size(); ++ci) {
    CellColumns& c = cols[ci];
    EntropyCell cell;
    cell.n = c.n;
    cell.alpha = c.alpha;
    cell.L = c.L;
    cell.K = c.K;
    const double nd = static_cast<double>(c.n);
    const double ad = static_cast<double>(c.alpha);
    cell.H_T_bound = nd / ad * std::log(ad + 1.0);
    cell.H_D_bound = std::log(static_cast<double>(c.L) * nd + 1.0);
    cell.residual = std::log(static_cast<double>(pin_down_bound(c.n, c.alpha, M, config.spec.rank))) / nd;

    cell.bad_fraction.push_back(wilson_interval(0, trials));
    for (std::int64_t k = 1; k <= c.K; ++k) {
      std::int64_t bad = 0;
      for (std::int64_t t = 0; t < trials; ++t) bad += c.at(static_cast<std::size_t>(k - 1), t, trials) == 0 ? 1 : 0;
      cell.bad_fraction.push_back(wilson_interval(bad, trials));
      if (k < c.K) {
        cell.interior_bad += bad;
        cell.interior_count += trials;
        cell.max_interior_bad_upper = std::max(cell.max_interior_bad_upper, cell.bad_fraction.back().hi);
      }
    }

    std::vector<std::int64_t> scratch;
    for (std::size_t col = 0; col < c.width(); ++col) {
      const std::span<const std::uint64_t> raw(c.values.data() + col * static_cast<std::size_t>(trials),
                                               static_cast<std::size_t>(trials));
      DenseLabels dl = dense_labels(raw);
      if (dl.distinct <= 1) continue;
      const auto K = static_cast<std::size_t>(c.K);
      const Component comp = col < K ? Component::T : col < 2 * K ? Component::B : col == 2 * K ? Component::D : Component::S;
      if (scratch.size() < dl.distinct) scratch.resize(dl.distinct);
      const double h = column_entropy(dl, scratch);
      switch (comp) {
        case Component::T: cell.H_T += h; break;
        case Component::B: cell.H_B += h; break;
        case Component::D: cell.H_D += h; break;
        case Component::S: cell.H_S += h; break;
      }
      max_distinct = std::max(max_distinct, dl.distinct);
      labelled[ci].push_back(LabelledColumn{comp, std::move(dl)});
    }
    cell.total = cell.H_T + cell.H_D + cell.H_B + cell.H_S;
    std::vector<std::uint64_t>().swap(c.values);
    report.cells.push_back(std::move(cell));
  }

  if (config.bootstrap > 0) {
    std::vector<std::int64_t> scratch(max_distinct, 0);
    std::vector<std::uint32_t> sample(static_cast<std::size_t>(trials));
    const StreamKey base = StreamKey(sim.seed).child(kBootstrapStream);
    for (int b = 0; b < config.bootstrap; ++b) {
      CounterRng rng(base.child(static_cast<std::uint64_t>(b)));
      for (auto& s : sample) s = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(trials)));
      for (std::size_t ci = 0; ci < labelled.size(); ++ci) {
        double total = 0.0;
        for (const auto& col : labelled[ci]) {
          total += entropy_of_resample(col.labels, sample, EntropyMethod::plug_in_miller_madow, scratch);
        }
        report.cells[ci].total_replicates.push_back(total);
      }
    }
    for (auto& cell : report.cells) {
      cell.total_std_error = cell.total_replicates.size() >= 2 ? sample_std(cell.total_replicates) : 0.0;
    }
  }
  return report;
}

EntropyCell partition_entropy_report(const AlternatingSpec& spec, std::int64_t n, std::int64_t alpha,
                                     std::int64_t L, const SimulationConfig& sim, int bootstrap) {
  if (sim.trials < 100) throw std::invalid_argument("partition_entropy_report: trials must be >= 100");
  EntropyGridConfig cfg;
  cfg.spec = spec;
  cfg.n_grid = {n};
  cfg.alpha_grid = {alpha};
  cfg.L_rule.fixed = L;
  cfg.sim = sim;
  cfg.bootstrap = bootstrap;
  return entropy_sublinearity_experiment(cfg).cells.front();
}

PinDownSummary pin_down_experiment(const PinDownConfig& config) {
  const SimulationConfig& sim = config.sim;
  check_sim(sim);
  if (config.n < 0) throw std::invalid_argument("walk length n must be >= 0");
  const std::int64_t L = choose_L(config.spec, config.alpha, config.L_rule, sim.seed);
  const std::int64_t H = horizon_for(config.n, sim.horizon_factor);
  if (static_cast<std::int64_t>(std::floor(sim.theta * static_cast<double>(H))) < config.n) {
    throw std::invalid_argument("theta * horizon must reach n");
  }
  const PivotParams params = pivot_params_for(config.spec.schottky, sim.chain_check);
  const int rank = config.spec.rank;

  PinDownSummary s;
  s.n = config.n;
  s.alpha = config.alpha;
  s.L = L;
  s.trials = sim.trials;
  s.bound = pin_down_bound(config.n, config.alpha, params.M(), rank);

  const AlternatingSampler sampler(config.spec);
  struct Part {
    std::vector<PinDownRow> rows;
    std::optional<std::string> failure;
  };
  std::vector<Part> parts(static_cast<std::size_t>(chunk_count(sim.trials, sim.threads)));
  for_each_chunk(sim.trials, sim.threads, [&](std::int64_t chunk, std::int64_t first, std::int64_t last) {
    Part& part = parts[static_cast<std::size_t>(chunk)];
    PathGeometry g;
    for (std::int64_t trial = first; trial < last; ++trial) {
      const AlternatingPath path = sampler.sample(H + 1, sim.seed, static_cast<std::uint64_t>(trial));
      g.build(path);
      const PivotState state = run_pivots(g, H, params);
      const PivotReport rep = stable_pivots(g, state, sim.theta);
      const ThetaWalkView view(path, g, config.n);
      const PartitionData d = build_partition(view, rep.stable_pivots, config.n, config.alpha, L, true);
      const RunWord proxy = g.tree().runs(g.position(H));
      const RunWord truth = g.tree().runs(g.position(config.n));

      PinDownRow row;
      row.trial = trial;
      std::string why;
      try {
        const PinDownResult res = pin_down(d, proxy, params.M(), rank, &truth);
        row.found = res.true_position_found;
        row.candidates = res.candidates.size();
        row.r_hat = res.r_hat;
        row.last_good = res.last_good;
        row.bad_chains = static_cast<std::int64_t>(res.chain_lengths.size());
        row.true_distance = g.position(d.t[static_cast<std::size_t>(res.last_good)]).depth;
        if (!row.found) why = "true position missing from candidates";
      } catch (const std::invalid_argument& e) {
        why = e.what();
      }
      std::string recon;
      row.reconstruction_ok = verify_reconstruction(d, view, &recon);
      if (!row.reconstruction_ok && why.empty()) why = recon;
      if (row.candidates > s.bound && why.empty()) why = "candidate count above bound";
      if (!why.empty() && !part.failure) {
        part.failure = reproducer(sim.seed, trial, config.n, config.alpha, L, H) + ": " + why;
      }
      part.rows.push_back(row);
    }
  });
  for (auto& part : parts) {
    for (const auto& row : part.rows) {
      s.found += row.found ? 1 : 0;
      s.within_bound += row.candidates <= s.bound ? 1 : 0;
      s.reconstructed += row.reconstruction_ok ? 1 : 0;
      s.max_candidates = std::max(s.max_candidates, row.candidates);
      s.rows.push_back(row);
    }
    if (!s.first_failure) s.first_failure = part.failure;
  }
  return s;
}

PivotGrowthReport fellow_travel_experiment(const FellowTravelConfig& config) {
  check_sim(config.sim);
  return pivot_growth_stats(config.spec, config.blocks, config.sim.trials, config.sim.seed, config.sim.theta,
                            config.sim.threads, pivot_params_for(config.spec.schottky, config.sim.chain_check));
}

void write_entropy_csv(std::ostream& out, const EntropyGridReport& report) {
  out << "n,alpha,L,metric,value,std_error\n";
  for (const auto& c : report.cells) {
    auto row = [&](const char* metric, double v, double se = 0.0) {
      out << c.n << ',' << c.alpha << ',' << c.L << ',' << metric << ',' << v << ',' << se << '\n';
    };
    row("H_T", c.H_T);
    row("H_T_bound", c.H_T_bound);
    row("H_D", c.H_D);
    row("H_D_bound", c.H_D_bound);
    row("H_B", c.H_B);
    row("H_S", c.H_S);
    row("total", c.total, c.total_std_error);
    row("total_per_n", c.per_n(c.total), c.per_n(c.total_std_error));
    row("H_T_per_n", c.per_n(c.H_T));
    row("H_T_per_n_bound", std::log(static_cast<double>(c.alpha) + 1.0) / static_cast<double>(c.alpha));
    row("residual", c.residual);
  }
}

void write_bad_rate_csv(std::ostream& out, const EntropyGridReport& report) {
  out << "n,alpha,L,k,trials,bad_fraction,wilson_lo,wilson_hi\n";
  for (const auto& c : report.cells) {
    for (std::size_t k = 0; k < c.bad_fraction.size(); ++k) {
      const auto& p = c.bad_fraction[k];
      out << c.n << ',' << c.alpha << ',' << c.L << ',' << k << ',' << report.trials << ',' << p.estimate << ','
          << p.lo << ',' << p.hi << '\n';
    }
  }
}

void write_pin_down_csv(std::ostream& out, const PinDownSummary& s) {
  out << "trial,n,alpha,L,found,reconstruction_ok,candidates,bound,r_hat,true_distance,last_good,bad_chains\n";
  for (const auto& r : s.rows) {
    out << r.trial << ',' << s.n << ',' << s.alpha << ',' << s.L << ',' << (r.found ? 1 : 0) << ','
        << (r.reconstruction_ok ? 1 : 0) << ',' << r.candidates << ',' << s.bound << ',' << r.r_hat << ','
        << r.true_distance << ',' << r.last_good << ',' << r.bad_chains << '\n';
  }
}

void write_pivot_csv(std::ostream& out, const PivotGrowthReport& r) {
  out << "metric,key,value\n";
  out << "rate,," << r.rate.mean << '\n';
  out << "rate_std_error,," << r.rate.std_error << '\n';
  out << "stable_rate,," << r.stable_rate << '\n';
  for (const auto& [gap, count] : r.gap_histogram) out << "gap_count," << gap << ',' << count << '\n';
  for (const auto& w : r.no_pivot_windows) out << "no_pivot_probability," << w.window << ',' << w.probability << '\n';
}

nlohmann::json to_json(const PivotGrowthReport& r) {
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : r.no_pivot_windows) {
    windows.push_back({{"window", w.window}, {"windows", w.windows}, {"empty", w.empty}, {"probability", w.probability}});
  }
  nlohmann::json j = {{"blocks", r.blocks},
                      {"trials", r.trials},
                      {"rate", r.rate.mean},
                      {"rate_std_error", r.rate.std_error},
                      {"stable_rate", r.stable_rate},
                      {"stable_total", r.stable_total},
                      {"no_pivot_windows", windows},
                      {"chain_violations", r.chain_violations},
                      {"deviation_violations", r.deviation_violations},
                      {"max_geodesic_deviation", r.max_geodesic_deviation.to_double()}};
  if (r.decay_fit) {
    j["decay_fit"] = {{"slope", r.decay_fit->slope}, {"intercept", r.decay_fit->intercept},
                      {"r_squared", r.decay_fit->r_squared}, {"points", r.decay_fit->points}};
  }
  if (r.first_failure) j["first_failure"] = *r.first_failure;
  return j;
}

nlohmann::json to_json(const EntropyGridReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"n", c.n},
                     {"alpha", c.alpha},
                     {"L", c.L},
                     {"K", c.K},
                     {"H_T", c.H_T},
                     {"H_T_bound", c.H_T_bound},
                     {"H_D", c.H_D},
                     {"H_D_bound", c.H_D_bound},
                     {"H_B", c.H_B},
                     {"H_S", c.H_S},
                     {"total", c.total},
                     {"total_std_error", c.total_std_error},
                     {"total_per_n", c.per_n(c.total)},
                     {"residual", c.residual},
                     {"interior_bad", c.interior_bad},
                     {"interior_count", c.interior_count},
                     {"max_interior_bad_upper", c.max_interior_bad_upper}});
  }
  return {{"trials", report.trials}, {"horizon", report.horizon}, {"cells", cells}, {"pivots", to_json(report.pivots)}};
}

nlohmann::json to_json(const PinDownSummary& s) {
  nlohmann::json j = {{"n", s.n},
                      {"alpha", s.alpha},
                      {"L", s.L},
                      {"trials", s.trials},
                      {"found", s.found},
                      {"within_bound", s.within_bound},
                      {"reconstructed", s.reconstructed},
                      {"bound", s.bound},
                      {"max_candidates", s.max_candidates},
                      {"passed", s.passed()}};
  if (s.first_failure) j["first_failure"] = *s.first_failure;
  return j;
}

}  // namespace pivotlab

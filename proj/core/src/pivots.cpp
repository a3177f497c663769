#include "pivotlab/pivots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pivotlab/geometry.hpp"
#include "pivotlab/parallel.hpp"

namespace pivotlab {

void PathGeometry::build(const AlternatingPath& path) {
  tree_.clear();
  const auto b = static_cast<std::size_t>(path.size());
  y_minus_.assign(b + 1, TreePoint{});
  y_.assign(b + 1, TreePoint{});
  y_plus_.assign(b + 1, TreePoint{});
  TreePoint cur = tree_.root();
  for (std::size_t i = 1; i <= b; ++i) {
    const AlternatingBlock& blk = path.blocks[i - 1];
    y_minus_[i] = tree_.multiply(cur, blk.kappa);
    y_[i] = tree_.multiply(y_minus_[i], path.schottky[static_cast<std::size_t>(blk.a)]);
    y_plus_[i] = tree_.multiply(y_[i], path.schottky[static_cast<std::size_t>(blk.b)]);
    cur = y_plus_[i];
  }
}

PivotParams pivot_params_for(const SchottkySet& S, ChainCheck check) {
  PivotParams p;
  p.C = S.C;
  p.D = S.D;
  p.delta = HalfInt(0);
  p.chain_check = check;
  return p;
}

void PivotState::record_violation(std::string what) {
  if (!first_violation_) first_violation_ = std::move(what);
}

std::vector<TreePoint> PivotState::chain_points(const PathGeometry& g) const {
  std::vector<TreePoint> pts;
  pts.reserve(2 * pivots_.size() + 2);
  pts.push_back(g.tree().root());
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    if (i > 0) pts.push_back(g.y_minus(pivots_[i]));
    pts.push_back(g.y(pivots_[i]));
  }
  pts.push_back(g.y_minus(n_ + 1));
  return pts;
}

void PivotState::check_chain(const PathGeometry& g) {
  if (pivots_.empty()) return;  // e, y_{n+1}^- alone: no pivot, nothing to certify
  const TreeSpace space(g.tree());
  const ChainParams cp{params_.chain_C(), params_.chain_D(), params_.delta};
  std::vector<TreePoint> pts;
  if (params_.chain_check == ChainCheck::full) {
    pts = chain_points(g);
  } else {
    // Only the last pivot (and y_{n+1}^-) changed; the tail of five points
    // covers every product and distance that involves them.
    const std::size_t p = pivots_.size();
    const std::size_t from = p >= 2 ? p - 2 : 0;
    if (from == 0) pts.push_back(g.tree().root());
    for (std::size_t i = from; i < p; ++i) {
      if (i > 0) pts.push_back(g.y_minus(pivots_[i]));
      pts.push_back(g.y(pivots_[i]));
    }
    pts.push_back(g.y_minus(n_ + 1));
    if (pts.size() > 5) pts.erase(pts.begin(), pts.end() - 5);
  }
  if (!is_chain<TreeSpace>(space, pts, cp)) {
    ++chain_violations_;
    std::ostringstream os;
    os << "chain invariant failed at n=" << n_ << " (#P=" << pivots_.size() << ")";
    record_violation(os.str());
  }
  if (params_.chain_check == ChainCheck::full) {
    const HalfInt bound = params_.C * 2 + params_.delta * 6;
    const TreePoint e = pts.front();
    const TreePoint z = pts.back();
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      if (g.tree().gromov_product(e, z, pts[i]) > bound) {
        ++canoe_violations_;
        std::ostringstream os;
        os << "pivot point off [e, y_{n+1}^-] by more than 2C+6delta at n=" << n_;
        record_violation(os.str());
        break;
      }
    }
  }
}

void PivotState::update(const PathGeometry& g) {
  const std::int64_t n = n_ + 1;
  const WordTree& t = g.tree();
  const TreePoint yk = pivots_.empty() ? t.root() : g.y(pivots_.back());
  const TreePoint ym = g.y_minus(n);
  const TreePoint yn = g.y(n);
  const TreePoint yp = g.y_plus(n);
  const TreePoint next = g.y_minus(n + 1);
  const HalfInt C = params_.C;
  const bool local = t.gromov_product(yk, yn, ym) <= C && t.gromov_product(ym, yp, yn) <= C &&
                     t.gromov_product(yn, next, yp) <= C;
  n_ = n;
  if (local) {
    pivots_.push_back(n);
  } else {
    ++backtracks_;
    const TreeSpace space(t);
    const HalfInt shadow_C = C + params_.delta;
    while (!pivots_.empty()) {
      const std::int64_t m = pivots_.back();
      if (in_chain_shadow(space, next, g.y(m), g.y_plus(m), shadow_C, params_.delta)) break;
      pivots_.pop_back();
    }
  }
  if (params_.chain_check != ChainCheck::none) check_chain(g);
}

PivotState run_pivots(const PathGeometry& g, std::int64_t horizon, PivotParams params) {
  if (horizon > g.horizon()) throw std::invalid_argument("run_pivots: horizon exceeds sampled blocks - 1");
  PivotState s(params);
  for (std::int64_t n = 1; n <= horizon; ++n) s.update(g);
  return s;
}

PivotReport stable_pivots(const PathGeometry& g, const PivotState& state, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("stable_pivots: theta must lie in (0, 1]");
  PivotReport r;
  r.horizon = state.n();
  r.reported_limit = static_cast<std::int64_t>(std::floor(theta * static_cast<double>(r.horizon)));
  r.M_bound = state.params().M();
  const WordTree& t = g.tree();
  const TreePoint e = t.root();
  const TreePoint w = g.position(r.horizon);
  for (std::int64_t k : state.pivotal_times()) {
    if (k > r.reported_limit) break;
    r.stable_pivots.push_back(k);
    const HalfInt dev = std::max(t.gromov_product(e, w, g.y_minus(k)), t.gromov_product(e, w, g.y(k)));
    r.max_geodesic_deviation = std::max(r.max_geodesic_deviation, dev);
    if (dev > r.M_bound) ++r.deviation_violations;
  }
  return r;
}

std::vector<std::int64_t> free_group_pivots(const SamplePath& path, HalfInt M) {
  std::vector<std::int64_t> out;
  const ReducedWord e;
  const std::int64_t n = path.n();
  for (std::int64_t k = 1; k <= n; ++k) {
    const ReducedWord& wk = path.positions[static_cast<std::size_t>(k)];
    bool pivotal = true;
    for (std::int64_t h = k; h <= n && pivotal; ++h) {
      pivotal = gromov_product(e, path.positions[static_cast<std::size_t>(h)], wk) <= M;
    }
    if (pivotal) out.push_back(k);
  }
  return out;
}

std::vector<WindowDecayRow> no_pivot_windows(const std::vector<std::int64_t>& stable, std::int64_t limit) {
  std::vector<WindowDecayRow> rows;
  if (limit < 4) return rows;
  std::vector<std::int64_t> upto(static_cast<std::size_t>(limit + 1), 0);
  for (std::int64_t k : stable) {
    if (k >= 1 && k <= limit) upto[static_cast<std::size_t>(k)] = 1;
  }
  for (std::size_t i = 1; i < upto.size(); ++i) upto[i] += upto[i - 1];
  for (std::int64_t w = 2; 2 * w <= limit; w *= 2) {
    WindowDecayRow row;
    row.window = w;
    for (std::int64_t s = 1; s + w - 1 <= limit; ++s) {
      ++row.windows;
      if (upto[static_cast<std::size_t>(s + w - 1)] == upto[static_cast<std::size_t>(s - 1)]) ++row.empty;
    }
    row.probability = static_cast<double>(row.empty) / static_cast<double>(row.windows);
    rows.push_back(row);
  }
  return rows;
}

void PivotGrowthAccumulator::add(const PivotState& state, const PivotReport& report, std::uint64_t seed,
                                 std::int64_t trial) {
  rates_.push_back(state.n() > 0 ? static_cast<double>(state.pivotal_times().size()) / static_cast<double>(state.n())
                                 : 0.0);
  stable_total_ += static_cast<std::int64_t>(report.stable_pivots.size());
  stable_range_total_ += report.reported_limit;
  for (std::size_t i = 1; i < report.stable_pivots.size(); ++i) {
    ++gaps_[report.stable_pivots[i] - report.stable_pivots[i - 1]];
  }
  for (const auto& row : no_pivot_windows(report.stable_pivots, report.reported_limit)) {
    auto& [w, e] = windows_[row.window];
    w += row.windows;
    e += row.empty;
  }
  chain_violations_ += state.chain_violations() + state.canoe_violations();
  deviation_violations_ += report.deviation_violations;
  max_dev_ = std::max(max_dev_, report.max_geodesic_deviation);
  if (!first_failure_ && (state.first_violation() || report.deviation_violations > 0)) {
    std::ostringstream os;
    os << "seed=" << seed << " trial=" << trial << " horizon=" << report.horizon << ": "
       << (state.first_violation() ? *state.first_violation()
                                   : "stable pivot deviates from [e, W_N] by " + report.max_geodesic_deviation.to_string());
    first_failure_ = os.str();
  }
}

void PivotGrowthAccumulator::merge(const PivotGrowthAccumulator& other) {
  rates_.insert(rates_.end(), other.rates_.begin(), other.rates_.end());
  stable_total_ += other.stable_total_;
  stable_range_total_ += other.stable_range_total_;
  for (const auto& [g, c] : other.gaps_) gaps_[g] += c;
  for (const auto& [w, we] : other.windows_) {
    windows_[w].first += we.first;
    windows_[w].second += we.second;
  }
  chain_violations_ += other.chain_violations_;
  deviation_violations_ += other.deviation_violations_;
  max_dev_ = std::max(max_dev_, other.max_dev_);
  if (!first_failure_) first_failure_ = other.first_failure_;
}

PivotGrowthReport PivotGrowthAccumulator::finish(std::int64_t blocks, std::uint64_t seed) const {
  PivotGrowthReport r;
  r.blocks = blocks;
  r.trials = static_cast<std::int64_t>(rates_.size());
  r.rate = bootstrap_mean(rates_, 200, seed);
  r.stable_rate = stable_range_total_ > 0 ? static_cast<double>(stable_total_) / static_cast<double>(stable_range_total_) : 0.0;
  r.gap_histogram = gaps_;
  std::vector<double> xs, ys;
  for (const auto& [w, we] : windows_) {
    WindowDecayRow row{w, we.first, we.second, we.first > 0 ? static_cast<double>(we.second) / static_cast<double>(we.first) : 0.0};
    r.no_pivot_windows.push_back(row);
    if (row.empty > 0) {
      xs.push_back(static_cast<double>(w));
      ys.push_back(std::log(row.probability));
    }
  }
  if (xs.size() >= 3) r.decay_fit = linear_fit(xs, ys);
  r.chain_violations = chain_violations_;
  r.deviation_violations = deviation_violations_;
  r.max_geodesic_deviation = max_dev_;
  r.stable_total = stable_total_;
  r.first_failure = first_failure_;
  return r;
}

PivotGrowthReport pivot_growth_stats(const AlternatingSpec& spec, std::int64_t blocks, std::int64_t trials,
                                     std::uint64_t seed, double theta, int threads,
                                     std::optional<PivotParams> params) {
  if (trials < 1) throw std::invalid_argument("pivot_growth_stats: trials must be >= 1");
  if (blocks < 1) throw std::invalid_argument("pivot_growth_stats: blocks must be >= 1");
  const PivotParams p = params.value_or(pivot_params_for(spec.schottky));
  const AlternatingSampler sampler(spec);
  std::vector<PivotGrowthAccumulator> parts(static_cast<std::size_t>(chunk_count(trials, threads)));
  for_each_chunk(trials, threads, [&](std::int64_t c, std::int64_t first, std::int64_t last) {
    PathGeometry g;
    for (std::int64_t trial = first; trial < last; ++trial) {
      const AlternatingPath path = sampler.sample(blocks + 1, seed, static_cast<std::uint64_t>(trial));
      g.build(path);
      const PivotState s = run_pivots(g, blocks, p);
      parts[static_cast<std::size_t>(c)].add(s, stable_pivots(g, s, theta), seed, trial);
    }
  });
  for (std::size_t i = 1; i < parts.size(); ++i) parts[0].merge(parts[i]);
  return parts[0].finish(blocks, seed);
}

}  // namespace pivotlab

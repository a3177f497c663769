#include "pivotlab/partitions.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pivotlab/rng.hpp"

namespace pivotlab {

namespace {

RunWord prefix_of(const RunWord& w, std::int64_t len) {
  std::vector<Run> out;
  for (const Run& r : w.runs()) {
    if (len <= 0) break;
    const std::int64_t take = std::min(len, r.count);
    out.push_back(Run{r.letter, take});
    len -= take;
  }
  return RunWord::reduce(out);
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw std::overflow_error("candidate count exceeds 64 bits");
  }
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) throw std::overflow_error("candidate count exceeds 64 bits");
  return a + b;
}

/// Number of nonempty reduced words of length < b whose first letter is fixed:
/// sum_{j<b} (2k-1)^j.
std::uint64_t tail_count(std::int64_t b, int rank) {
  std::uint64_t total = 0;
  std::uint64_t term = 1;
  const auto branch = static_cast<std::uint64_t>(2 * rank - 1);
  for (std::int64_t j = 0; j < b; ++j) {
    total = checked_add(total, term);
    if (j + 1 < b) term = checked_mul(term, branch);
  }
  return total;
}

}  // namespace

std::int64_t interval_count(std::int64_t n, std::int64_t alpha) {
  if (alpha < 1) throw std::invalid_argument("interval length alpha must be >= 1");
  if (n < 0) throw std::invalid_argument("walk length n must be >= 0");
  return (n + alpha - 1) / alpha;
}

std::vector<IntervalIndex> make_intervals(std::int64_t n, std::int64_t alpha) {
  const std::int64_t K = interval_count(n, alpha);
  std::vector<IntervalIndex> out;
  out.reserve(static_cast<std::size_t>(K + 1));
  out.push_back(IntervalIndex{0, 0, 0});
  for (std::int64_t k = 1; k <= K; ++k) {
    out.push_back(IntervalIndex{k, alpha * (k - 1) + 1, std::min(alpha * k, n)});
  }
  return out;
}

std::int64_t interval_of(std::int64_t t, std::int64_t alpha) { return t <= 0 ? 0 : (t + alpha - 1) / alpha; }

std::vector<IntervalClass> classify_intervals(std::span<const std::int64_t> increment_lengths,
                                              std::span<const std::int64_t> stable, std::int64_t n,
                                              std::int64_t alpha, std::int64_t L) {
  if (L < 1) throw std::invalid_argument("length threshold L must be >= 1");
  const std::int64_t K = interval_count(n, alpha);
  if (static_cast<std::int64_t>(increment_lengths.size()) < n) {
    throw std::invalid_argument("classify_intervals: fewer increment lengths than n");
  }
  std::vector<IntervalClass> cls(static_cast<std::size_t>(K + 1), IntervalClass::bad);
  std::vector<char> has_pivot(static_cast<std::size_t>(K + 1), 0);
  for (std::int64_t t : stable) {
    if (t >= 1 && t <= n) has_pivot[static_cast<std::size_t>(interval_of(t, alpha))] = 1;
  }
  cls[0] = IntervalClass::good;
  for (std::int64_t k = 1; k < K; ++k) {
    if (!has_pivot[static_cast<std::size_t>(k)]) continue;
    bool short_steps = true;
    for (std::int64_t j = alpha * (k - 1) + 1; j <= alpha * k && short_steps; ++j) {
      short_steps = increment_lengths[static_cast<std::size_t>(j - 1)] <= L;
    }
    if (short_steps) cls[static_cast<std::size_t>(k)] = IntervalClass::good;
  }
  return cls;
}

ThetaWalkView::ThetaWalkView(const AlternatingPath& path, const PathGeometry& geometry, std::int64_t steps)
    : path_(&path), geometry_(&geometry), steps_(steps) {
  if (steps < 0 || steps > path.size() || steps > geometry.blocks()) {
    throw std::invalid_argument("ThetaWalkView: steps exceed the sampled path");
  }
  increments_.reserve(static_cast<std::size_t>(steps));
  lengths_.reserve(static_cast<std::size_t>(steps));
  fingerprints_.reserve(static_cast<std::size_t>(steps));
  for (std::int64_t j = 1; j <= steps; ++j) {
    increments_.push_back(path.increment(j));
    lengths_.push_back(increments_.back().length());
    fingerprints_.push_back(fingerprint(increments_.back()));
  }
}

ExplicitWalkView::ExplicitWalkView(const SamplePath& path, std::vector<std::int32_t> marks)
    : marks_(std::move(marks)) {
  if (!marks_.empty() && static_cast<std::int64_t>(marks_.size()) != path.n()) {
    throw std::invalid_argument("ExplicitWalkView: one mark per step expected");
  }
  for (const auto& g : path.increments) increments_.push_back(RunWord::from_word(g));
  for (const auto& w : path.positions) positions_.push_back(RunWord::from_word(w));
}

PartitionData build_partition(const WalkView& walk, std::span<const std::int64_t> stable, std::int64_t n,
                              std::int64_t alpha, std::int64_t L, bool record_increments) {
  if (n > walk.steps()) throw std::invalid_argument("build_partition: n exceeds the walk");
  std::vector<std::int64_t> lengths(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j) lengths[static_cast<std::size_t>(j - 1)] = walk.increment_length(j);

  PartitionData d;
  d.n = n;
  d.alpha = alpha;
  d.L = L;
  d.classes = classify_intervals(lengths, stable, n, alpha, L);
  d.increments_recorded = record_increments;
  const auto K = static_cast<std::int64_t>(d.classes.size()) - 1;

  d.t.assign(static_cast<std::size_t>(K + 1), -1);
  d.t[0] = 0;
  for (std::int64_t t : stable) {
    if (t < 1 || t > n) continue;
    auto& slot = d.t[static_cast<std::size_t>(interval_of(t, alpha))];
    if (slot < 0 || t < slot) slot = t;
  }
  for (std::int64_t k = 1; k <= K; ++k) {
    if (d.classes[static_cast<std::size_t>(k)] == IntervalClass::bad) d.t[static_cast<std::size_t>(k)] = -1;
  }

  std::int64_t prev = 0;
  for (std::int64_t k = 1; k <= K; ++k) {
    if (d.classes[static_cast<std::size_t>(k)] != IntervalClass::good) continue;
    if (d.classes[static_cast<std::size_t>(k - 1)] == IntervalClass::good) {
      d.good_distance += walk.distance(d.t[static_cast<std::size_t>(prev)], d.t[static_cast<std::size_t>(k)]);
    }
    prev = k;
  }

  for (std::int64_t k = 1; k <= K; ++k) {
    if (d.classes[static_cast<std::size_t>(k)] != IntervalClass::bad) continue;
    BadBlock b;
    b.k = k;
    b.first = std::max<std::int64_t>(1, alpha * (k - 2) + 1);
    b.last = std::min(n, alpha * (k + 1));
    std::uint64_t h = mix64(static_cast<std::uint64_t>(b.last - b.first + 1));
    for (std::int64_t j = b.first; j <= b.last; ++j) {
      h = mix64(h ^ walk.increment_fingerprint(j));
      if (record_increments) b.increments.push_back(walk.increment(j));
    }
    b.fingerprint = h;
    d.bad_blocks.push_back(std::move(b));
  }

  std::int64_t last_stable = 0;
  for (std::int64_t t : stable) {
    if (t >= 1 && t <= n) last_stable = std::max(last_stable, t);
  }
  d.final_schottky = last_stable > 0 ? walk.schottky_mark(last_stable) : -1;
  return d;
}

CandidateSet::CandidateSet(RunWord proxy, std::int64_t lo, std::int64_t hi, std::int64_t radius, int rank,
                           RunWord suffix)
    : lo_(lo), hi_(hi), radius_(radius), rank_(rank), suffix_(std::move(suffix)) {
  if (lo < 0 || hi < lo || radius < 0) throw std::invalid_argument("CandidateSet: need 0 <= lo <= hi, radius >= 0");
  if (rank < 1) throw std::invalid_argument("CandidateSet: rank must be >= 1");
  if (hi > proxy.length()) throw std::invalid_argument("CandidateSet: window extends past the proxy");
  // Points projecting beyond hi + radius are out of reach, so the proxy can
  // be cut there without changing membership or counts.
  proxy_ = proxy.length() > hi + radius ? prefix_of(proxy, hi + radius) : std::move(proxy);
}

std::uint64_t CandidateSet::size() const {
  const std::int64_t len = proxy_.length();
  const std::int64_t from = std::max<std::int64_t>(0, lo_ - radius_);
  const std::int64_t to = std::min(len, hi_ + radius_);
  std::uint64_t total = 0;
  for (std::int64_t pi = from; pi <= to; ++pi) {
    const std::int64_t gap = pi < lo_ ? lo_ - pi : (pi > hi_ ? pi - hi_ : 0);
    const std::int64_t budget = radius_ - gap;
    std::int64_t branches = 2 * rank_ - 2;
    if (len == 0) {
      branches = 2 * rank_;
    } else if (pi == 0 || pi == len) {
      branches = 2 * rank_ - 1;
    }
    const std::uint64_t off = checked_mul(static_cast<std::uint64_t>(branches), tail_count(budget, rank_));
    total = checked_add(total, checked_add(1, off));
  }
  return total;
}

bool CandidateSet::contains(const RunWord& x) const {
  const RunWord p = x * suffix_.inverse();
  if (p.max_generator() > rank_) return false;
  const std::int64_t pi = common_prefix_length(p, proxy_);
  const std::int64_t gap = pi < lo_ ? lo_ - pi : (pi > hi_ ? pi - hi_ : 0);
  return p.length() - pi + gap <= radius_;
}

std::vector<ReducedWord> CandidateSet::enumerate(std::size_t limit) const {
  if (size() > limit) throw std::length_error("CandidateSet::enumerate: set larger than limit");
  std::vector<ReducedWord> out;
  const ReducedWord proxy = proxy_.to_word();
  const ReducedWord suffix = suffix_.to_word();
  const auto len = static_cast<std::int64_t>(proxy.length());
  const std::int64_t from = std::max<std::int64_t>(0, lo_ - radius_);
  const std::int64_t to = std::min(len, hi_ + radius_);

  std::vector<Letter> word;
  auto emit = [&] {
    ReducedWord w;
    for (Letter l : word) w.push(l);
    out.push_back(w * suffix);
  };
  // Extends `word` by up to `budget` letters avoiding `forbidden` at the first step.
  auto grow = [&](auto&& self, std::int64_t budget, const std::vector<Letter>& forbidden) -> void {
    if (budget == 0) return;
    for (int i = 1; i <= rank_; ++i) {
      for (int s : {1, -1}) {
        const Letter l = Letter::generator(i, s);
        if (std::find(forbidden.begin(), forbidden.end(), l) != forbidden.end()) continue;
        word.push_back(l);
        emit();
        self(self, budget - 1, std::vector<Letter>{l.inverse()});
        word.pop_back();
      }
    }
  };
  for (std::int64_t pi = from; pi <= to; ++pi) {
    word.assign(proxy.letters().begin(), proxy.letters().begin() + pi);
    emit();
    const std::int64_t gap = pi < lo_ ? lo_ - pi : (pi > hi_ ? pi - hi_ : 0);
    std::vector<Letter> forbidden;
    if (pi < len) forbidden.push_back(proxy[static_cast<std::size_t>(pi)]);
    if (pi > 0) forbidden.push_back(proxy[static_cast<std::size_t>(pi - 1)].inverse());
    grow(grow, radius_ - gap, forbidden);
  }
  return out;
}

std::uint64_t pin_down_bound(std::int64_t n, std::int64_t alpha, HalfInt M, int rank) {
  const std::int64_t intervals = (4 * n + alpha - 1) / alpha;
  return checked_mul(static_cast<std::uint64_t>(std::max<std::int64_t>(intervals, 1)),
                     ball_size(M.twice(), rank));
}

namespace {

/// Recorded increments indexed by step, from the bad blocks.
std::vector<const RunWord*> recorded_increments(const PartitionData& d) {
  std::vector<const RunWord*> inc(static_cast<std::size_t>(d.n + 1), nullptr);
  for (const BadBlock& b : d.bad_blocks) {
    for (std::int64_t j = b.first; j <= b.last; ++j) {
      inc[static_cast<std::size_t>(j)] = &b.increments[static_cast<std::size_t>(j - b.first)];
    }
  }
  return inc;
}

RunWord product(const std::vector<const RunWord*>& inc, std::int64_t from, std::int64_t to) {
  RunWord w;
  for (std::int64_t j = from; j <= to; ++j) {
    const RunWord* g = inc[static_cast<std::size_t>(j)];
    if (g == nullptr) throw std::logic_error("pin_down: increment outside the recorded bad blocks");
    w *= *g;
  }
  return w;
}

}  // namespace

PinDownResult pin_down(const PartitionData& d, const RunWord& proxy, HalfInt M, int rank, const RunWord* truth) {
  if (!d.increments_recorded) throw std::invalid_argument("pin_down: partition was built without increments");
  PinDownResult r;
  r.bound = pin_down_bound(d.n, d.alpha, M, rank);
  const auto K = static_cast<std::int64_t>(d.classes.size()) - 1;
  const auto inc = recorded_increments(d);

  std::int64_t last_good = 0;
  for (std::int64_t k = 0; k <= K; ++k) {
    if (d.classes[static_cast<std::size_t>(k)] == IntervalClass::good) last_good = k;
  }
  r.last_good = last_good;
  r.r_hat = d.good_distance;
  std::int64_t prev = 0;
  for (std::int64_t k = 1; k <= last_good; ++k) {
    if (d.classes[static_cast<std::size_t>(k)] != IntervalClass::good) continue;
    if (k > prev + 1) {
      const RunWord chain = product(inc, d.t[static_cast<std::size_t>(prev)] + 1, d.t[static_cast<std::size_t>(k)]);
      r.chain_lengths.push_back(chain.length());
      r.r_hat += chain.length();
    }
    prev = k;
  }
  const std::int64_t t_last = d.t[static_cast<std::size_t>(last_good)];
  r.w_last = product(inc, t_last + 1, d.n);

  if (last_good == 0) {
    r.candidates = CandidateSet(RunWord{}, 0, 0, 0, rank, r.w_last);
  } else {
    const std::int64_t half = M.twice() * d.n / d.alpha;
    const std::int64_t lo = std::max<std::int64_t>(0, r.r_hat - half);
    const std::int64_t hi = r.r_hat + half;
    if (hi > proxy.length()) throw std::invalid_argument("pin_down: proxy shorter than the reconstruction window");
    r.candidates = CandidateSet(proxy, lo, hi, M.floor(), rank, r.w_last);
  }
  if (truth != nullptr) r.true_position_found = r.candidates.contains(*truth);
  return r;
}

bool verify_reconstruction(const PartitionData& d, const WalkView& walk, std::string* failure) {
  const auto K = static_cast<std::int64_t>(d.classes.size()) - 1;
  const auto inc = recorded_increments(d);
  auto fail = [&](const std::string& what) {
    if (failure != nullptr) *failure = what;
    return false;
  };
  std::int64_t prev = 0;
  std::int64_t last_good = 0;
  for (std::int64_t k = 1; k <= K; ++k) {
    if (d.classes[static_cast<std::size_t>(k)] != IntervalClass::good) continue;
    last_good = k;
    if (k > prev + 1) {
      const std::int64_t a = d.t[static_cast<std::size_t>(prev)];
      const std::int64_t b = d.t[static_cast<std::size_t>(k)];
      if (walk.position(a) * product(inc, a + 1, b) != walk.position(b)) {
        std::ostringstream os;
        os << "bad chain between t=" << a << " and t=" << b << " does not rebuild";
        return fail(os.str());
      }
    }
    prev = k;
  }
  const std::int64_t t_last = d.t[static_cast<std::size_t>(last_good)];
  if (walk.position(t_last) * product(inc, t_last + 1, d.n) != walk.position(d.n)) {
    return fail("p_last W_last differs from W_n");
  }
  return true;
}

}  // namespace pivotlab

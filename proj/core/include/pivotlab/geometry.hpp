#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pivotlab/half_integer.hpp"
#include "pivotlab/word.hpp"
#include "pivotlab/word_tree.hpp"

namespace pivotlab {

/// Raised when a lemma checker is handed inputs outside the lemma's hypotheses.
class PreconditionViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Anything with integer distances between its points.
template <class S>
concept MetricSpace = requires(const S& s, const typename S::Point& p) {
  { s.dist(p, p) } -> std::convertible_to<std::int64_t>;
};

/// The Cayley tree of a free group, points as explicit words.
struct FreeGroupSpace {
  using Point = ReducedWord;
  std::int64_t dist(const Point& x, const Point& y) const { return pivotlab::dist(x, y); }
};

/// Points stored inside a WordTree.
class TreeSpace {
 public:
  using Point = TreePoint;
  explicit TreeSpace(const WordTree& tree) : tree_(&tree) {}
  std::int64_t dist(const Point& x, const Point& y) const { return tree_->dist(x, y); }
  const WordTree& tree() const { return *tree_; }

 private:
  const WordTree* tree_;
};

template <MetricSpace S>
HalfInt gromov_product(const S& space, const typename S::Point& x, const typename S::Point& y,
                       const typename S::Point& z) {
  return HalfInt::from_twice(space.dist(x, z) + space.dist(y, z) - space.dist(x, y));
}

/// Constants (C, D) of a chain and the hyperbolicity constant delta.
struct ChainParams {
  HalfInt C;
  HalfInt D;
  HalfInt delta;

  /// D >= 2C + 2delta + 1, the hypothesis of the local-to-global lemma.
  bool local_to_global_applies() const { return D >= C * 2 + delta * 2 + HalfInt(1); }
};

/// Interior Gromov products <= C and consecutive distances >= D.
/// Throws std::invalid_argument for fewer than two points.
template <MetricSpace S>
bool is_chain(const S& space, std::span<const typename S::Point> points, const ChainParams& p) {
  if (points.size() < 2) throw std::invalid_argument("is_chain: need at least 2 points");
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (HalfInt(space.dist(points[i], points[i + 1])) < p.D) return false;
  }
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    if (gromov_product(space, points[i - 1], points[i + 1], points[i]) > p.C) return false;
  }
  return true;
}

struct CanoeReport {
  bool gromov_bound_ok = true;   // (x_0, x_n)_{x_i} <= C + 2delta at every interior i
  bool length_bound_ok = true;   // d(x_0, x_n) >= n
  HalfInt worst_product;         // max interior (x_0, x_n)_{x_i}
  std::int64_t endpoint_distance = 0;
};

/// Evaluates both conclusions of the local-to-global lemma for a chain.
/// Throws PreconditionViolation if the points are not a (C,D)-chain or
/// D < 2C + 2delta + 1.
template <MetricSpace S>
CanoeReport check_canoe(const S& space, std::span<const typename S::Point> points,
                        const ChainParams& p) {
  if (!p.local_to_global_applies()) {
    throw PreconditionViolation("check_canoe: requires D >= 2C + 2delta + 1");
  }
  if (!is_chain(space, points, p)) throw PreconditionViolation("check_canoe: not a (C,D)-chain");
  CanoeReport r;
  const auto& first = points.front();
  const auto& last = points.back();
  r.endpoint_distance = space.dist(first, last);
  r.length_bound_ok = r.endpoint_distance >= static_cast<std::int64_t>(points.size() - 1);
  const HalfInt limit = p.C + p.delta * 2;
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const HalfInt g = gromov_product(space, first, last, points[i]);
    r.worst_product = std::max(r.worst_product, g);
    if (g > limit) r.gromov_bound_ok = false;
  }
  return r;
}

/// Sufficient test for z lying in the C-chain-shadow of y_plus seen from y:
/// the two-point chain (y, z) must have d(y,z) >= 2C + 2delta + 1 and
/// (y, z)_{y_plus} <= C. A true answer certifies membership; false only
/// means this particular witness fails.
template <MetricSpace S>
bool in_chain_shadow(const S& space, const typename S::Point& z, const typename S::Point& y,
                     const typename S::Point& y_plus, HalfInt C, HalfInt delta) {
  const HalfInt min_step = C * 2 + delta * 2 + HalfInt(1);
  if (HalfInt(space.dist(y, z)) < min_step) return false;
  return gromov_product(space, y, z, y_plus) <= C;
}

/// Multi-point search for a chain-shadow witness y = x_0, x_1, ..., x_m = z
/// whose intermediate points are drawn, in order, from `via`. Returns the
/// indices into `via` of the intermediate points, or nullopt. Cubic in
/// via.size(); meant for diagnostics on recorded pivot points.
template <MetricSpace S>
std::optional<std::vector<std::size_t>> find_chain_shadow_witness(
    const S& space, const typename S::Point& z, const typename S::Point& y,
    const typename S::Point& y_plus, HalfInt C, HalfInt delta,
    std::span<const typename S::Point> via) {
  using Point = typename S::Point;
  if (in_chain_shadow(space, z, y, y_plus, C, delta)) return std::vector<std::size_t>{};
  const HalfInt min_step = C * 2 + delta * 2 + HalfInt(1);
  const std::size_t m = via.size();
  auto far_enough = [&](const Point& a, const Point& b) { return HalfInt(space.dist(a, b)) >= min_step; };
  auto turn_ok = [&](const Point& a, const Point& b, const Point& c) {
    return gromov_product(space, a, c, b) <= C;
  };
  // reach[i][j]: some chain y, ..., via[i], via[j] is valid so far (j > i);
  // index m stands for "y itself" as predecessor.
  std::vector<std::vector<char>> reach(m + 1, std::vector<char>(m, 0));
  std::vector<std::vector<std::size_t>> back(m + 1, std::vector<std::size_t>(m, m));
  for (std::size_t j = 0; j < m; ++j) {
    if (far_enough(y, via[j]) && gromov_product(space, y, via[j], y_plus) <= C) reach[m][j] = 1;
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i <= m; ++i) {
      if (i != m && i >= j) continue;
      if (!reach[i][j]) continue;
      const Point& prev = i == m ? y : via[i];
      if (far_enough(via[j], z) && turn_ok(prev, via[j], z)) {
        std::vector<std::size_t> chain{j};
        std::size_t a = i, b = j;
        while (a != m) {
          chain.push_back(a);
          const std::size_t nb = a;
          a = back[a][b];
          b = nb;
        }
        return std::vector<std::size_t>(chain.rbegin(), chain.rend());
      }
      for (std::size_t k = j + 1; k < m; ++k) {
        if (!reach[j][k] && far_enough(via[j], via[k]) && turn_ok(prev, via[j], via[k])) {
          reach[j][k] = 1;
          back[j][k] = i;
        }
      }
    }
  }
  return std::nullopt;
}

/// Distance in the tree from a to the geodesic [x, y]; equals (x, y)_a.
std::int64_t distance_to_geodesic(const ReducedWord& a, const ReducedWord& x, const ReducedWord& y);

/// Checks d(a, g a) <= 2C + 2K + 4delta for the isometry h -> g h of the
/// Cayley tree. Throws PreconditionViolation unless d(a, [x,y]) <= C,
/// d(x, gx) <= K and d(y, gy) <= K.
bool check_fellowtravel_lemma(const ReducedWord& a, const ReducedWord& x, const ReducedWord& y,
                              const ReducedWord& g, HalfInt C, HalfInt K, HalfInt delta);

}  // namespace pivotlab

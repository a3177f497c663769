#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pivotlab/half_integer.hpp"
#include "pivotlab/run_word.hpp"
#include "pivotlab/word.hpp"

namespace pivotlab {

/// A vertex of the Cayley tree held inside a WordTree: the prefix of length
/// `depth` of the word spelled by `node`.
struct TreePoint {
  std::int32_t node = 0;
  std::int64_t depth = 0;

  friend bool operator==(const TreePoint&, const TreePoint&) = default;
};

/// Arena of reduced words sharing prefixes, for walks whose positions are far
/// too long to copy. Edges carry a single-letter run x^m, so powers such as
/// x_i^102 cost one node. Nodes are append-only (a branch in the middle of a
/// run attaches at an offset instead of splitting it), which keeps Myers jump
/// pointers valid and gives O(log) common-prefix queries.
///
/// Invariants: every reduced word has exactly one normalized TreePoint; the
/// children hanging off one node at one offset start with distinct letters,
/// none equal to the run's own continuation.
class WordTree {
 public:
  WordTree();

  /// Drops every node except the root; keeps allocated capacity.
  void clear();

  TreePoint root() const { return TreePoint{}; }

  /// p * x^count for a single letter x; count may be zero.
  TreePoint multiply_run(TreePoint p, Letter x, std::int64_t count);
  TreePoint multiply(TreePoint p, const ReducedWord& w);
  TreePoint multiply(TreePoint p, const RunWord& w);
  TreePoint insert(const ReducedWord& w) { return multiply(root(), w); }

  std::int64_t length(TreePoint p) const { return p.depth; }
  std::int64_t common_prefix(TreePoint p, TreePoint q) const;
  std::int64_t dist(TreePoint p, TreePoint q) const {
    return p.depth + q.depth - 2 * common_prefix(p, q);
  }
  HalfInt gromov_product(TreePoint x, TreePoint y, TreePoint z) const {
    return HalfInt::from_twice(dist(x, z) + dist(y, z) - dist(x, y));
  }

  /// The prefix of p of length len (clamped to [0, |p|]).
  TreePoint prefix(TreePoint p, std::int64_t len) const;
  std::optional<Letter> last_letter(TreePoint p) const;

  ReducedWord word(TreePoint p) const;
  RunWord runs(TreePoint p) const;
  /// from^{-1} * to, built from the two diverging suffixes only.
  ReducedWord between(TreePoint from, TreePoint to) const;
  RunWord runs_between(TreePoint from, TreePoint to) const;

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::int32_t parent;
    std::int32_t jump;
    std::int32_t hops;
    Letter letter;
    std::int64_t attach;  // length of the parent prefix this run hangs from
    std::int64_t depth;   // length of the word at the end of this run
  };

  struct ChildKey {
    std::int32_t node;
    std::int32_t letter;
    std::int64_t attach;
    friend bool operator==(const ChildKey&, const ChildKey&) = default;
  };
  struct ChildKeyHash {
    std::size_t operator()(const ChildKey& k) const noexcept;
  };

  std::int32_t find_child(std::int32_t node, std::int64_t attach, Letter x) const;
  std::int32_t add_child(std::int32_t parent, std::int64_t attach, Letter x, std::int64_t count);
  TreePoint normalize(std::int32_t node, std::int64_t depth) const;
  std::int32_t ancestor_at_hops(std::int32_t v, std::int32_t hops) const;
  std::int32_t lca(std::int32_t u, std::int32_t v) const;
  /// Runs of p strictly below depth `floor`, ordered from p upwards.
  std::vector<Run> runs_above(TreePoint p, std::int64_t floor) const;

  std::vector<Node> nodes_;
  std::unordered_map<ChildKey, std::int32_t, ChildKeyHash> children_;
};

}  // namespace pivotlab

#include "pivotlab/word_tree.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "pivotlab/rng.hpp"

namespace pivotlab {

namespace {

constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

}  // namespace

std::size_t WordTree::ChildKeyHash::operator()(const ChildKey& k) const noexcept {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.node)) << 32 |
                          static_cast<std::uint32_t>(k.letter));
  return static_cast<std::size_t>(mix64(h ^ static_cast<std::uint64_t>(k.attach)));
}

WordTree::WordTree() { clear(); }

void WordTree::clear() {
  nodes_.clear();
  nodes_.push_back(Node{0, 0, 0, Letter::generator(1), 0, 0});
  children_.clear();
}

std::int32_t WordTree::find_child(std::int32_t node, std::int64_t attach, Letter x) const {
  const auto it = children_.find(ChildKey{node, x.code(), attach});
  return it == children_.end() ? -1 : it->second;
}

std::int32_t WordTree::add_child(std::int32_t parent, std::int64_t attach, Letter x,
                                 std::int64_t count) {
  if (nodes_.size() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw std::length_error("WordTree: node arena exhausted");
  }
  const Node& p = nodes_[static_cast<std::size_t>(parent)];
  const Node& pj = nodes_[static_cast<std::size_t>(p.jump)];
  const Node& pjj = nodes_[static_cast<std::size_t>(pj.jump)];
  // Myers skew-binary jump pointers.
  const std::int32_t jump = (p.hops - pj.hops == pj.hops - pjj.hops) ? pj.jump : parent;
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{parent, jump, p.hops + 1, x, attach, attach + count});
  children_.emplace(ChildKey{parent, x.code(), attach}, id);
  return id;
}

TreePoint WordTree::normalize(std::int32_t node, std::int64_t depth) const {
  while (node != 0 && depth <= nodes_[static_cast<std::size_t>(node)].attach) {
    node = nodes_[static_cast<std::size_t>(node)].parent;
  }
  return TreePoint{node, depth};
}

TreePoint WordTree::multiply_run(TreePoint p, Letter x, std::int64_t count) {
  if (count < 0) throw std::invalid_argument("WordTree::multiply_run: negative count");
  std::int32_t v = p.node;
  std::int64_t d = p.depth;
  std::int64_t m = count;
  while (m > 0) {
    Node& n = nodes_[static_cast<std::size_t>(v)];
    if (v != 0 && n.letter.cancels(x)) {
      const std::int64_t k = std::min(m, d - n.attach);
      d -= k;
      m -= k;
      if (d == n.attach) v = normalize(n.parent, d).node;
      continue;
    }
    if (v != 0 && d < n.depth && n.letter == x) {
      const std::int64_t k = std::min(m, n.depth - d);
      d += k;
      m -= k;
      continue;
    }
    const std::int32_t c = find_child(v, d, x);
    if (c >= 0) {
      const std::int64_t k = std::min(m, nodes_[static_cast<std::size_t>(c)].depth - d);
      v = c;
      d += k;
      m -= k;
      continue;
    }
    if (v != 0 && d == n.depth && n.letter == x) {
      n.depth += m;
      d += m;
      break;
    }
    v = add_child(v, d, x, m);
    d += m;
    break;
  }
  return TreePoint{v, d};
}

TreePoint WordTree::multiply(TreePoint p, const ReducedWord& w) {
  const auto letters = w.letters();
  std::size_t i = 0;
  while (i < letters.size()) {
    std::size_t j = i + 1;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    p = multiply_run(p, letters[i], static_cast<std::int64_t>(j - i));
    i = j;
  }
  return p;
}

std::int32_t WordTree::ancestor_at_hops(std::int32_t v, std::int32_t hops) const {
  while (nodes_[static_cast<std::size_t>(v)].hops > hops) {
    const Node& n = nodes_[static_cast<std::size_t>(v)];
    v = nodes_[static_cast<std::size_t>(n.jump)].hops >= hops ? n.jump : n.parent;
  }
  return v;
}

std::int32_t WordTree::lca(std::int32_t u, std::int32_t v) const {
  const std::int32_t hu = nodes_[static_cast<std::size_t>(u)].hops;
  const std::int32_t hv = nodes_[static_cast<std::size_t>(v)].hops;
  if (hu > hv) u = ancestor_at_hops(u, hv);
  if (hv > hu) v = ancestor_at_hops(v, hu);
  while (u != v) {
    const Node& nu = nodes_[static_cast<std::size_t>(u)];
    const Node& nv = nodes_[static_cast<std::size_t>(v)];
    if (nu.jump != nv.jump) {
      u = nu.jump;
      v = nv.jump;
    } else {
      u = nu.parent;
      v = nv.parent;
    }
  }
  return u;
}

std::int64_t WordTree::common_prefix(TreePoint p, TreePoint q) const {
  const std::int64_t shallow = std::min(p.depth, q.depth);
  if (p.node == q.node) return shallow;
  const std::int32_t c = lca(p.node, q.node);
  const std::int32_t below = nodes_[static_cast<std::size_t>(c)].hops + 1;
  const std::int64_t bp =
      p.node == c ? kUnbounded : nodes_[static_cast<std::size_t>(ancestor_at_hops(p.node, below))].attach;
  const std::int64_t bq =
      q.node == c ? kUnbounded : nodes_[static_cast<std::size_t>(ancestor_at_hops(q.node, below))].attach;
  return std::min({bp, bq, shallow});
}

TreePoint WordTree::prefix(TreePoint p, std::int64_t len) const {
  if (len >= p.depth) return p;
  if (len <= 0) return root();
  std::int32_t v = p.node;
  while (v != 0 && nodes_[static_cast<std::size_t>(v)].attach >= len) {
    const Node& n = nodes_[static_cast<std::size_t>(v)];
    v = (n.jump != 0 && nodes_[static_cast<std::size_t>(n.jump)].attach >= len) ? n.jump : n.parent;
  }
  return TreePoint{v, len};
}

std::optional<Letter> WordTree::last_letter(TreePoint p) const {
  if (p.depth == 0) return std::nullopt;
  return nodes_[static_cast<std::size_t>(p.node)].letter;
}

std::vector<Run> WordTree::runs_above(TreePoint p, std::int64_t floor) const {
  std::vector<Run> runs;
  std::int32_t v = p.node;
  std::int64_t d = p.depth;
  while (d > floor) {
    const Node& n = nodes_[static_cast<std::size_t>(v)];
    const std::int64_t lo = std::max(n.attach, floor);
    runs.push_back(Run{n.letter, d - lo});
    d = lo;
    if (d == n.attach) v = normalize(n.parent, d).node;
  }
  return runs;
}

ReducedWord WordTree::word(TreePoint p) const {
  std::vector<Letter> letters;
  letters.reserve(static_cast<std::size_t>(p.depth));
  const auto runs = runs_above(p, 0);
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    letters.insert(letters.end(), static_cast<std::size_t>(it->count), it->letter);
  }
  return ReducedWord::reduce(letters);
}

TreePoint WordTree::multiply(TreePoint p, const RunWord& w) {
  for (const Run& r : w.runs()) p = multiply_run(p, r.letter, r.count);
  return p;
}

RunWord WordTree::runs(TreePoint p) const {
  auto up = runs_above(p, 0);
  std::reverse(up.begin(), up.end());
  return RunWord::reduce(up);
}

RunWord WordTree::runs_between(TreePoint from, TreePoint to) const {
  const std::int64_t c = common_prefix(from, to);
  std::vector<Run> out = runs_above(from, c);
  for (Run& r : out) r.letter = r.letter.inverse();
  const auto up = runs_above(to, c);
  out.insert(out.end(), up.rbegin(), up.rend());
  return RunWord::reduce(out);
}

ReducedWord WordTree::between(TreePoint from, TreePoint to) const {
  const std::int64_t c = common_prefix(from, to);
  std::vector<Letter> letters;
  letters.reserve(static_cast<std::size_t>(from.depth + to.depth - 2 * c));
  for (const Run& r : runs_above(from, c)) {
    letters.insert(letters.end(), static_cast<std::size_t>(r.count), r.letter.inverse());
  }
  const auto up = runs_above(to, c);
  for (auto it = up.rbegin(); it != up.rend(); ++it) {
    letters.insert(letters.end(), static_cast<std::size_t>(it->count), it->letter);
  }
  return ReducedWord::reduce(letters);
}

}  // namespace pivotlab

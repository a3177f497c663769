#pragma once

// Slow, obviously-correct reference implementations. Words are plain
// vectors of signed generator codes (+i for x_i, -i for x_i^-1) so nothing
// here goes through the library's word arithmetic.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "pivotlab/word.hpp"

namespace oracle {

using Letters = std::vector<int>;

inline Letters naive_reduce(Letters w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == -w[i + 1]) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + 2));
        changed = true;
        break;
      }
    }
  }
  return w;
}

inline Letters concat(Letters a, const Letters& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline Letters naive_inverse(const Letters& w) {
  Letters out(w.rbegin(), w.rend());
  for (int& c : out) c = -c;
  return out;
}

inline Letters naive_multiply(const Letters& a, const Letters& b) { return naive_reduce(concat(a, b)); }

inline std::int64_t naive_dist(const Letters& x, const Letters& y) {
  return static_cast<std::int64_t>(naive_multiply(naive_inverse(x), y).size());
}

/// Twice the Gromov product (x, y)_z.
inline std::int64_t naive_gromov_twice(const Letters& x, const Letters& y, const Letters& z) {
  return naive_dist(x, z) + naive_dist(y, z) - naive_dist(x, y);
}

inline Letters random_letters(std::mt19937_64& rng, int rank, std::size_t len) {
  std::uniform_int_distribution<int> g(1, rank);
  std::bernoulli_distribution s(0.5);
  Letters w(len);
  for (auto& c : w) c = s(rng) ? g(rng) : -g(rng);
  return w;
}

inline Letters random_reduced(std::mt19937_64& rng, int rank, std::size_t len) {
  Letters w;
  while (w.size() < len) {
    const Letters one = random_letters(rng, rank, 1);
    if (!w.empty() && w.back() == -one[0]) continue;
    w.push_back(one[0]);
  }
  return w;
}

inline Letters codes(const pivotlab::ReducedWord& w) {
  Letters out;
  for (auto l : w.letters()) out.push_back(l.code());
  return out;
}

inline pivotlab::ReducedWord word(const Letters& reduced) {
  std::vector<pivotlab::Letter> ls;
  for (int c : reduced) ls.push_back(pivotlab::Letter::from_code(c));
  return pivotlab::ReducedWord::reduce(ls);
}

/// Every element of F_rank within word length r, by breadth-first search on
/// the Cayley graph.
inline std::set<Letters> bfs_ball(int rank, int r) {
  std::set<Letters> seen{Letters{}};
  std::vector<Letters> frontier{Letters{}};
  for (int step = 0; step < r; ++step) {
    std::vector<Letters> next;
    for (const auto& w : frontier) {
      for (int i = 1; i <= rank; ++i) {
        for (int c : {i, -i}) {
          Letters v = naive_reduce(concat(w, Letters{c}));
          if (seen.insert(v).second) next.push_back(std::move(v));
        }
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

/// A random (C, D)-chain x_0 = e, x_1, ..., x_len in F_rank: consecutive
/// steps are reduced words of length >= D and each step retraces at most C
/// letters of the previous one, so interior Gromov products are <= C.
inline std::vector<Letters> random_chain(std::mt19937_64& rng, int rank, int C, int D, std::size_t len) {
  std::vector<Letters> pts{Letters{}};
  Letters step = random_reduced(rng, rank, static_cast<std::size_t>(D) + rng() % 4);
  pts.push_back(step);
  while (pts.size() < len + 1) {
    const Letters back = naive_inverse(step);
    const auto overlap = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(C + 1));
    Letters next(back.begin(), back.begin() + static_cast<std::ptrdiff_t>(std::min(overlap, back.size())));
    const std::size_t target = std::max<std::size_t>(static_cast<std::size_t>(D), next.size() + 1) + rng() % 4;
    while (next.size() < target) {
      const int c = random_letters(rng, rank, 1)[0];
      if (next.size() == overlap && overlap < back.size() && c == back[overlap]) continue;
      if (!next.empty() && next.back() == -c) continue;
      next.push_back(c);
    }
    step = next;
    pts.push_back(naive_multiply(pts.back(), step));
  }
  return pts;
}

}  // namespace oracle

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pivotlab/measure.hpp"
#include "pivotlab/rng.hpp"
#include "pivotlab/word.hpp"

namespace pivotlab {

/// One trajectory w_0 = e, w_i = w_{i-1} g_i of the mu-random walk.
struct SamplePath {
  std::vector<ReducedWord> increments;  // g_1..g_n
  std::vector<ReducedWord> positions;   // w_0..w_n
  SeedRecord seed;

  std::int64_t n() const { return static_cast<std::int64_t>(increments.size()); }
};

/// Step i draws from the stream master -> trial -> i, so the path is a pure
/// function of (mu, n, seed, trial).
SamplePath sample_path(const Measure& mu, std::int64_t n, std::uint64_t seed, std::uint64_t trial = 0);

/// Path from explicit increments (positions recomputed).
SamplePath path_from_increments(std::vector<ReducedWord> increments);

/// CSV with header "step,increment,position"; row 0 is the origin with
/// increment "e".
void write_path_csv(std::ostream& out, const SamplePath& path);

}  // namespace pivotlab

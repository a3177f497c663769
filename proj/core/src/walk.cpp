#include "pivotlab/walk.hpp"

#include <ostream>
#include <stdexcept>

namespace pivotlab {

SamplePath sample_path(const Measure& mu, std::int64_t n, std::uint64_t seed, std::uint64_t trial) {
  if (n < 0) throw std::invalid_argument("sample_path: n must be >= 0");
  const MeasureSampler sampler(mu);
  const StreamKey key = StreamKey(seed).child(trial);
  std::vector<ReducedWord> increments;
  increments.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) {
    CounterRng rng(key.child(static_cast<std::uint64_t>(i)));
    increments.push_back(sampler.word(sampler.sample_index(rng)));
  }
  SamplePath path = path_from_increments(std::move(increments));
  path.seed = SeedRecord{seed, trial};
  return path;
}

SamplePath path_from_increments(std::vector<ReducedWord> increments) {
  SamplePath path;
  path.increments = std::move(increments);
  path.positions.reserve(path.increments.size() + 1);
  path.positions.emplace_back();
  for (const auto& g : path.increments) path.positions.push_back(path.positions.back() * g);
  return path;
}

void write_path_csv(std::ostream& out, const SamplePath& path) {
  out << "step,increment,position\n";
  out << "0,e," << to_string(path.positions.front()) << '\n';
  for (std::size_t i = 0; i < path.increments.size(); ++i) {
    out << (i + 1) << ',' << to_string(path.increments[i]) << ',' << to_string(path.positions[i + 1])
        << '\n';
  }
}

}  // namespace pivotlab

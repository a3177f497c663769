#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pivotlab {

struct SelfcheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfcheckReport {
  std::uint64_t seed = 0;
  std::vector<SelfcheckItem> items;

  bool passed() const;
  /// One line per check; contains no timings, thread counts or paths, so
  /// equal seeds give byte-identical text.
  std::string text() const;
};

/// Word oracle, canoe sweep, Schottky certification, pivot fellow-travel,
/// one pin-down trial and a small entropy grid.
SelfcheckReport selfcheck(std::uint64_t seed, int threads = 1);

}  // namespace pivotlab

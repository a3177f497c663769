#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pivotlab/word.hpp"

namespace pivotlab {

/// A maximal block x^count of one repeated letter.
struct Run {
  Letter letter;
  std::int64_t count = 0;

  friend bool operator==(const Run&, const Run&) = default;
};

/// Reduced word stored as maximal runs. Same group element as ReducedWord,
/// but x_i^102 costs one entry, which is what long walks with large Schottky
/// powers need. Adjacent runs always carry distinct, non-cancelling letters.
class RunWord {
 public:
  RunWord() = default;

  static RunWord from_word(const ReducedWord& w);
  static RunWord power(std::int32_t index, std::int64_t power);
  /// Reduces an arbitrary run sequence (counts must be >= 0).
  static RunWord reduce(std::span<const Run> runs);

  ReducedWord to_word() const;

  std::span<const Run> runs() const { return runs_; }
  std::int64_t length() const { return length_; }
  bool is_identity() const { return runs_.empty(); }
  std::int32_t max_generator() const;

  RunWord inverse() const;
  /// Right multiplication by x^count with cancellation.
  void push(Letter x, std::int64_t count);
  RunWord& operator*=(const RunWord& rhs);

  friend RunWord operator*(RunWord lhs, const RunWord& rhs) {
    lhs *= rhs;
    return lhs;
  }
  friend bool operator==(const RunWord&, const RunWord&) = default;

 private:
  std::vector<Run> runs_;
  std::int64_t length_ = 0;
};

std::int64_t common_prefix_length(const RunWord& x, const RunWord& y);
std::int64_t dist(const RunWord& x, const RunWord& y);
/// Hash of the run sequence; equal words hash equally.
std::uint64_t fingerprint(const RunWord& w, std::uint64_t seed = 0);
std::string to_string(const RunWord& w);

}  // namespace pivotlab

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pivotlab/half_integer.hpp"

namespace pivotlab {

/// A generator x_i or its inverse x_i^{-1}, encoded as the signed index.
/// Indices are unbounded (any positive int32), so F_infinity-style supports
/// need no separate type.
class Letter {
 public:
  /// Throws std::invalid_argument if index < 1 or sign is not +1/-1.
  static Letter generator(std::int32_t index, int sign = +1);
  constexpr Letter() = default;  // x_1
  static constexpr Letter from_code(std::int32_t code) { return Letter(code); }

  constexpr std::int32_t index() const { return code_ < 0 ? -code_ : code_; }
  constexpr int sign() const { return code_ < 0 ? -1 : +1; }
  constexpr std::int32_t code() const { return code_; }
  constexpr Letter inverse() const { return Letter(-code_); }
  constexpr bool cancels(Letter other) const { return code_ == -other.code_; }

  friend constexpr auto operator<=>(Letter, Letter) = default;

 private:
  explicit constexpr Letter(std::int32_t code) : code_(code) {}
  std::int32_t code_ = 1;
};

/// A freely reduced word; the empty word is the identity e. Every
/// constructor and mutator keeps the letters reduced.
class ReducedWord {
 public:
  ReducedWord() = default;

  /// Free reduction of an arbitrary letter sequence.
  static ReducedWord reduce(std::span<const Letter> letters);
  /// x_index^power (power may be negative or zero).
  static ReducedWord power(std::int32_t index, std::int64_t power);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  ReducedWord inverse() const;
  ReducedWord prefix(std::size_t len) const;
  /// Largest generator index occurring in the word (0 for e).
  std::int32_t max_generator() const;

  /// Right multiplication by a single letter, cancelling if needed.
  void push(Letter l);
  ReducedWord& operator*=(const ReducedWord& rhs);

  friend ReducedWord operator*(ReducedWord lhs, const ReducedWord& rhs) {
    lhs *= rhs;
    return lhs;
  }
  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  friend auto operator<=>(const ReducedWord& a, const ReducedWord& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  std::vector<Letter> letters_;
};

struct ReducedWordHash {
  std::size_t operator()(const ReducedWord& w) const noexcept;
};

/// 64-bit fingerprint of a word; stable across runs and platforms.
std::uint64_t fingerprint(const ReducedWord& w, std::uint64_t seed = 0);

ReducedWord reduce(std::span<const Letter> letters);
ReducedWord multiply(const ReducedWord& x, const ReducedWord& y);
ReducedWord inverse(const ReducedWord& x);

std::size_t common_prefix_length(const ReducedWord& x, const ReducedWord& y);

/// Word metric on the Cayley tree: |x^{-1} y|.
std::int64_t dist(const ReducedWord& x, const ReducedWord& y);

/// (x, y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2, exact.
HalfInt gromov_product(const ReducedWord& x, const ReducedWord& y, const ReducedWord& z);

/// The d(x,y)+1 tree vertices from x to y.
std::vector<ReducedWord> geodesic(const ReducedWord& x, const ReducedWord& y);

/// Number of elements of F_k within word length r. Throws std::overflow_error
/// when the count does not fit in 64 bits, std::invalid_argument if k < 1.
std::uint64_t ball_size(std::int64_t r, std::int64_t k);

/// Text form: generators 1..26 are 'a'..'z' (inverses 'A'..'Z'); larger
/// indices are tokens "x27" / "x27^-1". The identity is "e". The one-letter
/// word x_5 would collide with "e" and is written "x5".
std::string to_string(const ReducedWord& w);
/// Parses the text form; the result is reduced. Throws std::invalid_argument.
ReducedWord parse_word(std::string_view text);

}  // namespace pivotlab

#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace pivotlab {

/// Exact half-integer, stored as twice its value. Gromov products and chain
/// constants live here so geometric predicates never touch floating point.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(std::int64_t whole) : twice_(2 * whole) {}  // NOLINT: implicit by intent

  static constexpr HalfInt from_twice(std::int64_t twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }
  /// Throws std::invalid_argument unless 2*value is an integer.
  static HalfInt from_double(double value);

  constexpr std::int64_t twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double to_double() const { return static_cast<double>(twice_) / 2.0; }
  /// Largest integer not exceeding the value.
  constexpr std::int64_t floor() const {
    return twice_ >= 0 ? twice_ / 2 : -((-twice_ + 1) / 2);
  }

  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt operator*(std::int64_t k) const { return from_twice(twice_ * k); }
  friend constexpr HalfInt operator*(std::int64_t k, HalfInt h) { return h * k; }

  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

  /// "3", "2.5", "-0.5".
  std::string to_string() const;

 private:
  std::int64_t twice_ = 0;
};

}  // namespace pivotlab

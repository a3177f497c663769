#include "pivotlab/half_integer.hpp"

#include <cmath>
#include <stdexcept>

namespace pivotlab {

HalfInt HalfInt::from_double(double value) {
  const double twice = value * 2.0;
  if (!std::isfinite(twice) || std::nearbyint(twice) != twice) {
    throw std::invalid_argument("value is not a half-integer: " + std::to_string(value));
  }
  return from_twice(static_cast<std::int64_t>(twice));
}

std::string HalfInt::to_string() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  const std::int64_t whole = twice_ / 2;  // truncates toward zero
  if (twice_ < 0 && whole == 0) return "-0.5";
  return std::to_string(whole) + ".5";
}

}  // namespace pivotlab

#include "pivotlab/word.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>

namespace pivotlab {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Letter Letter::generator(std::int32_t index, int sign) {
  if (index < 1) throw std::invalid_argument("generator index must be >= 1");
  if (sign != 1 && sign != -1) throw std::invalid_argument("letter sign must be +1 or -1");
  return Letter(sign * index);
}

ReducedWord ReducedWord::reduce(std::span<const Letter> letters) {
  ReducedWord w;
  w.letters_.reserve(letters.size());
  for (Letter l : letters) w.push(l);
  return w;
}

ReducedWord ReducedWord::power(std::int32_t index, std::int64_t power) {
  ReducedWord w;
  if (power == 0) return w;
  const Letter l = Letter::generator(index, power > 0 ? 1 : -1);
  w.letters_.assign(static_cast<std::size_t>(power > 0 ? power : -power), l);
  return w;
}

ReducedWord ReducedWord::inverse() const {
  ReducedWord w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
  return w;
}

ReducedWord ReducedWord::prefix(std::size_t len) const {
  ReducedWord w;
  len = std::min(len, letters_.size());
  w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(len));
  return w;
}

std::int32_t ReducedWord::max_generator() const {
  std::int32_t m = 0;
  for (Letter l : letters_) m = std::max(m, l.index());
  return m;
}

void ReducedWord::push(Letter l) {
  if (!letters_.empty() && letters_.back().cancels(l)) {
    letters_.pop_back();
  } else {
    letters_.push_back(l);
  }
}

ReducedWord& ReducedWord::operator*=(const ReducedWord& rhs) {
  // Both factors are reduced, so cancellation only happens at the seam.
  std::size_t c = 0;
  const std::size_t limit = std::min(letters_.size(), rhs.letters_.size());
  while (c < limit && letters_[letters_.size() - 1 - c].cancels(rhs.letters_[c])) ++c;
  letters_.resize(letters_.size() - c);
  letters_.insert(letters_.end(), rhs.letters_.begin() + static_cast<std::ptrdiff_t>(c),
                  rhs.letters_.end());
  return *this;
}

std::size_t ReducedWordHash::operator()(const ReducedWord& w) const noexcept {
  return static_cast<std::size_t>(fingerprint(w));
}

std::uint64_t fingerprint(const ReducedWord& w, std::uint64_t seed) {
  std::uint64_t h = kFnvOffset ^ mix(seed);
  for (Letter l : w.letters()) {
    h ^= static_cast<std::uint32_t>(l.code());
    h *= kFnvPrime;
  }
  return mix(h ^ w.length());
}

ReducedWord reduce(std::span<const Letter> letters) { return ReducedWord::reduce(letters); }

ReducedWord multiply(const ReducedWord& x, const ReducedWord& y) { return x * y; }

ReducedWord inverse(const ReducedWord& x) { return x.inverse(); }

std::size_t common_prefix_length(const ReducedWord& x, const ReducedWord& y) {
  const auto a = x.letters();
  const auto b = y.letters();
  const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  return static_cast<std::size_t>(ia - a.begin());
}

std::int64_t dist(const ReducedWord& x, const ReducedWord& y) {
  const auto c = common_prefix_length(x, y);
  return static_cast<std::int64_t>(x.length() + y.length() - 2 * c);
}

HalfInt gromov_product(const ReducedWord& x, const ReducedWord& y, const ReducedWord& z) {
  return HalfInt::from_twice(dist(x, z) + dist(y, z) - dist(x, y));
}

std::vector<ReducedWord> geodesic(const ReducedWord& x, const ReducedWord& y) {
  const std::size_t c = common_prefix_length(x, y);
  std::vector<ReducedWord> path;
  path.reserve(x.length() + y.length() - 2 * c + 1);
  for (std::size_t len = x.length(); len > c; --len) path.push_back(x.prefix(len));
  for (std::size_t len = c; len <= y.length(); ++len) path.push_back(y.prefix(len));
  return path;
}

std::uint64_t ball_size(std::int64_t r, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("ball_size: rank must be >= 1");
  if (r < 0) throw std::invalid_argument("ball_size: radius must be >= 0");
  const auto ur = static_cast<std::uint64_t>(r);
  if (k == 1) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(ur, std::uint64_t{2}, &out) || __builtin_add_overflow(out, 1, &out)) {
      throw std::overflow_error("ball_size: count exceeds 64-bit range");
    }
    return out;
  }
  // 1 + 2k * sum_{j<r} (2k-1)^j, accumulated with overflow checks.
  const auto branch = static_cast<std::uint64_t>(2 * k - 1);
  const auto first = static_cast<std::uint64_t>(2 * k);
  std::uint64_t total = 1;
  std::uint64_t sphere = first;
  for (std::uint64_t j = 0; j < ur; ++j) {
    if (__builtin_add_overflow(total, sphere, &total)) {
      throw std::overflow_error("ball_size: count exceeds 64-bit range");
    }
    if (j + 1 < ur && __builtin_mul_overflow(sphere, branch, &sphere)) {
      throw std::overflow_error("ball_size: count exceeds 64-bit range");
    }
  }
  return total;
}

std::string to_string(const ReducedWord& w) {
  if (w.is_identity()) return "e";
  if (w.length() == 1 && w[0].code() == 5) return "x5";
  std::string out;
  out.reserve(w.length());
  for (Letter l : w.letters()) {
    if (l.index() <= 26) {
      out.push_back(static_cast<char>((l.sign() > 0 ? 'a' : 'A') + l.index() - 1));
    } else {
      out += 'x';
      out += std::to_string(l.index());
      if (l.sign() < 0) out += "^-1";
    }
  }
  return out;
}

ReducedWord parse_word(std::string_view text) {
  if (text == "e") return {};
  std::vector<Letter> letters;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == 'x' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      std::size_t j = i + 1;
      std::int64_t index = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        index = index * 10 + (text[j] - '0');
        if (index > std::numeric_limits<std::int32_t>::max()) {
          throw std::invalid_argument("generator index too large in word");
        }
        ++j;
      }
      int sign = 1;
      if (text.substr(j, 3) == "^-1") {
        sign = -1;
        j += 3;
      }
      if (index < 1) throw std::invalid_argument("generator index must be >= 1");
      letters.push_back(Letter::generator(static_cast<std::int32_t>(index), sign));
      i = j;
    } else if (c >= 'a' && c <= 'z') {
      letters.push_back(Letter::generator(c - 'a' + 1, 1));
      ++i;
    } else if (c >= 'A' && c <= 'Z') {
      letters.push_back(Letter::generator(c - 'A' + 1, -1));
      ++i;
    } else {
      throw std::invalid_argument("unexpected character in word: '" + std::string(1, c) + "'");
    }
  }
  return ReducedWord::reduce(letters);
}

}  // namespace pivotlab

#include "pivotlab/run_word.hpp"

#include <algorithm>
#include <stdexcept>

#include "pivotlab/rng.hpp"

namespace pivotlab {

RunWord RunWord::from_word(const ReducedWord& w) {
  RunWord r;
  for (Letter l : w.letters()) r.push(l, 1);
  return r;
}

RunWord RunWord::power(std::int32_t index, std::int64_t power) {
  RunWord r;
  if (power != 0) r.push(Letter::generator(index, power > 0 ? 1 : -1), power > 0 ? power : -power);
  return r;
}

RunWord RunWord::reduce(std::span<const Run> runs) {
  RunWord r;
  for (const Run& run : runs) {
    if (run.count < 0) throw std::invalid_argument("RunWord::reduce: negative run count");
    r.push(run.letter, run.count);
  }
  return r;
}

ReducedWord RunWord::to_word() const {
  std::vector<Letter> letters;
  letters.reserve(static_cast<std::size_t>(length_));
  for (const Run& r : runs_) letters.insert(letters.end(), static_cast<std::size_t>(r.count), r.letter);
  return ReducedWord::reduce(letters);
}

std::int32_t RunWord::max_generator() const {
  std::int32_t m = 0;
  for (const Run& r : runs_) m = std::max(m, r.letter.index());
  return m;
}

RunWord RunWord::inverse() const {
  RunWord r;
  r.runs_.reserve(runs_.size());
  for (auto it = runs_.rbegin(); it != runs_.rend(); ++it) r.runs_.push_back(Run{it->letter.inverse(), it->count});
  r.length_ = length_;
  return r;
}

void RunWord::push(Letter x, std::int64_t count) {
  while (count > 0) {
    if (runs_.empty()) {
      runs_.push_back(Run{x, count});
      length_ += count;
      return;
    }
    Run& back = runs_.back();
    if (back.letter == x) {
      back.count += count;
      length_ += count;
      return;
    }
    if (!back.letter.cancels(x)) {
      runs_.push_back(Run{x, count});
      length_ += count;
      return;
    }
    const std::int64_t k = std::min(back.count, count);
    back.count -= k;
    length_ -= k;
    count -= k;
    if (back.count == 0) runs_.pop_back();
  }
}

RunWord& RunWord::operator*=(const RunWord& rhs) {
  if (this == &rhs) {
    const RunWord copy = rhs;
    return *this *= copy;
  }
  for (const Run& r : rhs.runs_) push(r.letter, r.count);
  return *this;
}

std::int64_t common_prefix_length(const RunWord& x, const RunWord& y) {
  const auto a = x.runs();
  const auto b = y.runs();
  std::int64_t c = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i].letter != b[i].letter) break;
    c += std::min(a[i].count, b[i].count);
    if (a[i].count != b[i].count) break;
  }
  return c;
}

std::int64_t dist(const RunWord& x, const RunWord& y) {
  return x.length() + y.length() - 2 * common_prefix_length(x, y);
}

std::uint64_t fingerprint(const RunWord& w, std::uint64_t seed) {
  std::uint64_t h = mix64(seed ^ 0x52756e576f7264ULL);
  for (const Run& r : w.runs()) {
    h = mix64(h ^ static_cast<std::uint32_t>(r.letter.code()));
    h = mix64(h + static_cast<std::uint64_t>(r.count));
  }
  return mix64(h ^ static_cast<std::uint64_t>(w.length()));
}

std::string to_string(const RunWord& w) { return to_string(w.to_word()); }

}  // namespace pivotlab

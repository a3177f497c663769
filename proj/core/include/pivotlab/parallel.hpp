#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace pivotlab {

/// Splits [0, trials) into `threads` contiguous chunks and calls
/// fn(chunk_index, first, last) for each, one thread per chunk. Callers keep
/// one accumulator per chunk and merge them in chunk order, which makes the
/// result independent of the thread count whenever merging is associative.
/// The first exception thrown by any chunk is rethrown.
template <class Fn>
void for_each_chunk(std::int64_t trials, int threads, Fn&& fn) {
  const std::int64_t chunks = std::max<std::int64_t>(1, std::min<std::int64_t>(threads, trials));
  if (chunks == 1) {
    fn(std::int64_t{0}, std::int64_t{0}, trials);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(chunks));
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::int64_t first = trials * c / chunks;
    const std::int64_t last = trials * (c + 1) / chunks;
    pool.emplace_back([&, c, first, last] {
      try {
        fn(c, first, last);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Number of chunks for_each_chunk will use.
inline std::int64_t chunk_count(std::int64_t trials, int threads) {
  return std::max<std::int64_t>(1, std::min<std::int64_t>(threads, trials));
}

}  // namespace pivotlab

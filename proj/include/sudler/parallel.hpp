#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

namespace sudler {

/// Neumaier-compensated long double accumulator.
struct CompensatedSum {
  long double sum = 0;
  long double comp = 0;

  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  void merge(const CompensatedSum& o) {
    add(o.sum);
    add(o.comp);
  }
  long double value() const { return sum + comp; }
};

/// Terms per chunk. Fixed so the reduction order (and hence the result bits)
/// does not depend on the worker count.
inline constexpr std::uint64_t kChunkSize = std::uint64_t{1} << 15;

/// 0 means "all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Splits [first, last) into kChunkSize pieces, evaluates fn(begin, end) -> Acc
/// on up to `threads` workers, and merges the partial results in chunk order.
template <class Acc, class Fn>
Acc chunked_reduce(std::uint64_t first, std::uint64_t last, unsigned threads, Fn&& fn) {
  if (last <= first) return Acc{};
  const std::uint64_t chunks = (last - first + kChunkSize - 1) / kChunkSize;
  std::vector<Acc> partial(chunks);
  auto run = [&](std::uint64_t c) {
    const std::uint64_t b = first + c * kChunkSize;
    partial[c] = fn(b, std::min(last, b + kChunkSize));
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), chunks));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) run(c);
      });
    }
  }

  Acc total{};
  for (const Acc& a : partial) total.merge(a);
  return total;
}

}  // namespace sudler

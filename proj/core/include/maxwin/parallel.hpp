#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace maxwin {

/// Resolves a requested worker count; 0 means one per hardware thread.
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) {
    return requested;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `body(begin, end, counts)` over contiguous chunks of [0, trials) and
/// sums the per-chunk integer counters. Integer addition is associative, so
/// the result does not depend on the thread count.
template <class Body>
std::vector<std::uint64_t> parallel_count(std::uint64_t trials, std::size_t slots, unsigned threads, Body body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(trials, 1)));
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(slots, 0));
  const std::uint64_t chunk = (trials + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](unsigned w) {
    const std::uint64_t begin = std::min<std::uint64_t>(trials, w * chunk);
    const std::uint64_t end = std::min<std::uint64_t>(trials, begin + chunk);
    try {
      body(begin, end, std::span<std::uint64_t>(partial[w]));
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(run, w);
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  std::vector<std::uint64_t> total(slots, 0);
  for (const auto& p : partial) {
    for (std::size_t s = 0; s < slots; ++s) {
      total[s] += p[s];
    }
  }
  return total;
}

}  // namespace maxwin

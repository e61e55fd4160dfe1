#pragma once

#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "qhahn/rng.hpp"

namespace qhahn {

enum class Execution { serial, parallel };

// Worker count used by parallel kernels; 0 leaves the OpenMP default.
void set_worker_count(int workers);
int worker_count();

namespace detail {
void parallel_for(std::size_t count, void* ctx, void (*body)(void*, std::size_t));
}

// Calls fn(index, rng) for every replica with its own derived stream. Results
// written by index are independent of scheduling, so serial and parallel runs
// agree bit for bit.
template <class Fn>
void for_each_replica(std::size_t count, std::uint64_t seed, Execution exec, Fn&& fn) {
  auto run_one = [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    fn(i, rng);
  };
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
    return;
  }
  using Body = decltype(run_one);
  detail::parallel_for(count, &run_one, [](void* ctx, std::size_t i) { (*static_cast<Body*>(ctx))(i); });
}

// Runs fn(index) for each index, in parallel unless exec is serial.
template <class Fn>
void for_each_index(std::size_t count, Execution exec, Fn&& fn) {
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  using Body = std::remove_reference_t<Fn>;
  detail::parallel_for(count, &fn, [](void* ctx, std::size_t i) { (*static_cast<Body*>(ctx))(i); });
}

// Collects one value per replica in index order.
template <class T, class Fn>
std::vector<T> map_replicas(std::size_t count, std::uint64_t seed, Execution exec, Fn&& fn) {
  std::vector<T> out(count);
  for_each_replica(count, seed, exec, [&](std::size_t i, Rng& rng) { out[i] = fn(rng); });
  return out;
}

}  // namespace qhahn

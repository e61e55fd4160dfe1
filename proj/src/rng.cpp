#include "qhahn/rng.hpp"

#include <cmath>
#include <exception>

#include <omp.h>

#include "qhahn/errors.hpp"
#include "qhahn/parallel.hpp"

namespace qhahn {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng make_stream(std::uint64_t master, std::uint64_t index) {
  std::uint64_t a = splitmix64(master);
  std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

double exponential(Rng& rng, double rate) {
  if (!(rate > 0)) throw DomainError("exponential: rate must be positive");
  return -std::log(uniform_open(rng)) / rate;
}

namespace {
int g_workers = 0;
}

void set_worker_count(int workers) {
  g_workers = workers < 0 ? 0 : workers;
  if (g_workers > 0) omp_set_num_threads(g_workers);
}

int worker_count() { return g_workers > 0 ? g_workers : omp_get_max_threads(); }

namespace detail {

void parallel_for(std::size_t count, void* ctx, void (*body)(void*, std::size_t)) {
  std::exception_ptr failure;
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    try {
      body(ctx, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(qhahn_parallel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail
}  // namespace qhahn

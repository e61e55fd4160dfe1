#pragma once

#include <cstdint>
#include <random>

namespace qhahn {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Independent stream for replica `index` of a run seeded by `master`.
Rng make_stream(std::uint64_t master, std::uint64_t index);

// Uniform on [0,1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform on (0,1), never exactly zero.
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double exponential(Rng& rng, double rate);

}  // namespace qhahn

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hbl {

using Rng = std::mt19937_64;

/// Counter-based seed derivation: mixes a master seed with an ordered key
/// tuple through splitmix64. Distinct tuples give statistically independent
/// streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  return Rng(derive_seed(master, keys));
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Exponential with the given mean, by inversion.
double exponential(Rng& rng, double mean);

/// Exact Binomial(n, p) draw: sequential inversion for n <= 64, otherwise
/// the standard library's exact sampler.
int binomial(Rng& rng, int n, double p);

}  // namespace hbl

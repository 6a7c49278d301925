#include "hbl/random.hpp"

#include <cmath>

#include "hbl/error.hpp"
#include "hbl/parallel.hpp"

#include <omp.h>

namespace hbl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

double exponential(Rng& rng, double mean) { return -mean * std::log1p(-uniform01(rng)); }

int binomial(Rng& rng, int n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw InvalidInput("binomial: invalid parameters");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (n > 64) {
    std::binomial_distribution<int> dist(n, p);
    return dist(rng);
  }
  const bool flip = p > 0.5;
  const double pp = flip ? 1.0 - p : p;
  const double ratio = pp / (1.0 - pp);
  double f = std::pow(1.0 - pp, n);
  double u = uniform01(rng);
  int x = 0;
  while (u >= f && x < n) {
    u -= f;
    ++x;
    f *= ratio * static_cast<double>(n - x + 1) / static_cast<double>(x);
  }
  return flip ? n - x : x;
}

int resolve_threads(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

}  // namespace hbl

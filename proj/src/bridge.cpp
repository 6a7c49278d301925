#include "hbl/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hbl/error.hpp"
#include "hbl/random.hpp"

namespace hbl {

namespace {

double standard_exponential(Rng& rng) { return -std::log1p(-uniform01(rng)); }

// Bridge value at x1 given W0(x0) = w: Gaussian with mean w (1-x1)/(1-x0)
// and variance (x1-x0)(1-x1)/(1-x0).
double bridge_step(double w, double x0, double x1, double z) {
  const double rest = 1.0 - x0;
  if (rest <= 0.0) return 0.0;
  const double mean = w * (1.0 - x1) / rest;
  const double var = (x1 - x0) * (1.0 - x1) / rest;
  return mean + std::sqrt(std::max(var, 0.0)) * z;
}

// sup |W0| over a cell of length h with endpoint values a and b. Given the
// endpoints, the path inside is a Brownian bridge from a to b, whose maximum
// M satisfies P(M >= m) = exp(-2 (m-a)(m-b) / h); the minimum is symmetric.
double cell_abs_sup(double a, double b, double h, Rng& rng) {
  const double d2 = (b - a) * (b - a);
  const double top = 0.5 * (a + b + std::sqrt(d2 + 2.0 * h * standard_exponential(rng)));
  const double bottom = 0.5 * (a + b - std::sqrt(d2 + 2.0 * h * standard_exponential(rng)));
  return std::max(top, -bottom);
}

void check_interval(Weight weight, double c1, double c2) {
  if (!(c1 >= 0.0 && c1 <= c2 && c2 <= 1.0)) {
    throw InvalidInput("bridge interval requires 0 <= c1 <= c2 <= 1");
  }
  if (weight == Weight::ep && (c1 <= 0.0 || c2 >= 1.0)) {
    throw InvalidInput("EP weight diverges at 0 and 1; need 0 < c1 <= c2 < 1");
  }
}

double one_path(Weight weight, double c1, double c2, int grid, std::uint64_t seed, int index) {
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(index)}));
  std::normal_distribution<double> normal;
  double w = std::sqrt(c1 * (1.0 - c1)) * normal(rng);
  if (c1 == c2) return std::abs(w) * weight_value(weight, c1);

  const double h = (c2 - c1) / static_cast<double>(grid - 1);
  double x0 = c1;
  double best = 0.0;
  for (int i = 1; i < grid; ++i) {
    const double x1 = i == grid - 1 ? c2 : c1 + h * i;
    const double w1 = bridge_step(w, x0, x1, normal(rng));
    const double m = cell_abs_sup(w, w1, x1 - x0, rng);
    const double q = weight == Weight::hw ? 1.0 : weight_value(weight, 0.5 * (x0 + x1));
    best = std::max(best, q * m);
    w = w1;
    x0 = x1;
  }
  return best;
}

}  // namespace

double weight_value(Weight weight, double x) {
  if (weight == Weight::hw) return 1.0;
  if (!(x > 0.0 && x < 1.0)) throw InvalidInput("EP weight needs x in (0, 1)");
  return 1.0 / std::sqrt(x * (1.0 - x));
}

long order_statistic_rank(std::size_t n, double p) {
  const auto count = static_cast<long>(n);
  const long k = static_cast<long>(std::ceil(static_cast<double>(n + 1) * p - 1e-9));
  return std::clamp(k, 1L, std::max(count, 1L));
}

double empirical_quantile(std::span<double> values, double p) {
  if (values.empty()) throw InvalidInput("quantile of an empty sample");
  const long k = order_statistic_rank(values.size(), p);
  auto nth = values.begin() + (k - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

std::vector<double> bridge_sup_samples(Weight weight, double c1, double c2, int paths, int grid,
                                       std::uint64_t seed, Execution exec) {
  check_interval(weight, c1, c2);
  if (paths < 1) throw InvalidInput("bridge simulation needs at least one path");
  if (grid < 2 && c1 != c2) throw InvalidInput("bridge grid needs at least two points");

  std::vector<double> sups(static_cast<std::size_t>(paths));
  if (!exec.parallel) {
    for (int p = 0; p < paths; ++p) sups[p] = one_path(weight, c1, c2, grid, seed, p);
    return sups;
  }
#pragma omp parallel for schedule(static) num_threads(resolve_threads(exec.threads))
  for (int p = 0; p < paths; ++p) sups[p] = one_path(weight, c1, c2, grid, seed, p);
  return sups;
}

double brownian_bridge_sup_quantile(Weight weight, double c1, double c2, double theta, int paths,
                                    int grid, std::uint64_t seed, Execution exec) {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidInput("theta must lie in (0, 1)");
  if (paths < 1000) throw InvalidInput("bridge quantile needs at least 1000 paths");
  if (grid < 100) throw InvalidInput("bridge quantile needs at least 100 grid points");
  auto sups = bridge_sup_samples(weight, c1, c2, paths, grid, seed, exec);
  return empirical_quantile(sups, 1.0 - theta);
}

// Bank ---------------------------------------------------------------------

BridgeBank::BridgeBank(int paths, int cells, std::uint64_t seed, Execution exec)
    : paths_(paths), cells_(cells) {
  if (paths < 1 || cells < 2) throw InvalidInput("bridge bank needs paths >= 1 and cells >= 2");
  cell_sup_.resize(static_cast<std::size_t>(paths) * static_cast<std::size_t>(cells));
  ep_mid_weight_.resize(static_cast<std::size_t>(cells));
  const double h = 1.0 / cells;
  for (int c = 0; c < cells; ++c) ep_mid_weight_[c] = weight_value(Weight::ep, (c + 0.5) * h);

  auto fill = [&](int p) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(p)}));
    std::normal_distribution<double> normal;
    float* row = cell_sup_.data() + static_cast<std::size_t>(p) * cells_;
    double w = 0.0;
    double x0 = 0.0;
    for (int c = 0; c < cells_; ++c) {
      const double x1 = c == cells_ - 1 ? 1.0 : (c + 1) * h;
      const double w1 = bridge_step(w, x0, x1, normal(rng));
      row[c] = static_cast<float>(cell_abs_sup(w, w1, x1 - x0, rng));
      w = w1;
      x0 = x1;
    }
  };

  if (!exec.parallel) {
    for (int p = 0; p < paths; ++p) fill(p);
  } else {
#pragma omp parallel for schedule(static) num_threads(resolve_threads(exec.threads))
    for (int p = 0; p < paths; ++p) fill(p);
  }
}

std::pair<int, int> BridgeBank::cell_range(double c1, double c2) const {
  int lo = static_cast<int>(std::floor(c1 * cells_));
  int hi = static_cast<int>(std::ceil(c2 * cells_)) - 1;
  lo = std::clamp(lo, 0, cells_ - 1);
  hi = std::clamp(hi, lo, cells_ - 1);
  return {lo, hi};
}

std::pair<double, double> BridgeBank::quantiles(double c1, double c2, double theta) const {
  check_interval(Weight::hw, c1, c2);
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidInput("theta must lie in (0, 1)");
  const auto [lo, hi] = cell_range(c1, c2);
  std::vector<double> hw(static_cast<std::size_t>(paths_));
  std::vector<double> ep(static_cast<std::size_t>(paths_));
  const double* q = ep_mid_weight_.data();
  for (int p = 0; p < paths_; ++p) {
    const float* row = cell_sup_.data() + static_cast<std::size_t>(p) * cells_;
    double best_hw = 0.0;
    double best_ep = 0.0;
    for (int c = lo; c <= hi; ++c) {
      const double m = row[c];
      best_hw = std::max(best_hw, m);
      best_ep = std::max(best_ep, m * q[c]);
    }
    hw[p] = best_hw;
    ep[p] = best_ep;
  }
  return {empirical_quantile(hw, 1.0 - theta), empirical_quantile(ep, 1.0 - theta)};
}

double BridgeBank::quantile(Weight weight, double c1, double c2, double theta) const {
  check_interval(weight, c1, c2);
  const auto [hw, ep] = quantiles(c1, c2, theta);
  return weight == Weight::hw ? hw : ep;
}

}  // namespace hbl

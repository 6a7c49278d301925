#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hbl/parallel.hpp"

namespace hbl {

/// Weight q applied to the Brownian bridge: EP uses q(x) = {x(1-x)}^{-1/2},
/// HW uses q(x) = 1.
enum class Weight { hw, ep };

double weight_value(Weight weight, double x);

/// Rank k = ceil((n+1)p) clamped to [1, n]; a 1e-9 slack absorbs the
/// rounding of (n+1)p at exact integers.
long order_statistic_rank(std::size_t n, double p);

/// Empirical p-quantile as the k-th order statistic, k = ceil((n+1)p)
/// clamped to [1, n]. Reorders `values`.
double empirical_quantile(std::span<double> values, double p);

/// Per-path samples of sup_{x in [c1,c2]} |q(x) W0(x)|.
///
/// The bridge is simulated exactly at `grid` equally spaced points over
/// [c1, c2]. Between adjacent points the maximum and minimum of the bridge
/// are drawn from their exact conditional laws given the endpoints, so the
/// statistic tracks the continuous supremum rather than the grid maximum.
std::vector<double> bridge_sup_samples(Weight weight, double c1, double c2, int paths, int grid,
                                       std::uint64_t seed, Execution exec = Execution::serial());

/// K_{q,theta}(c1, c2): upper theta point of sup_{[c1,c2]} |q W0|.
double brownian_bridge_sup_quantile(Weight weight, double c1, double c2, double theta, int paths,
                                    int grid, std::uint64_t seed,
                                    Execution exec = Execution::serial());

/// Bank of bridge paths on a fixed uniform partition of [0, 1], reusable for
/// quantile queries over arbitrary [c1, c2]. Stores, per path and cell, the
/// supremum of |W0| over that cell.
class BridgeBank {
 public:
  BridgeBank(int paths, int cells, std::uint64_t seed, Execution exec = Execution::serial());

  double quantile(Weight weight, double c1, double c2, double theta) const;

  /// HW and EP quantiles from one pass over the bank.
  std::pair<double, double> quantiles(double c1, double c2, double theta) const;

  int paths() const noexcept { return paths_; }
  int cells() const noexcept { return cells_; }

 private:
  std::pair<int, int> cell_range(double c1, double c2) const;

  int paths_;
  int cells_;
  std::vector<float> cell_sup_;  // paths_ x cells_, row-major
  std::vector<double> ep_mid_weight_;
};

}  // namespace hbl

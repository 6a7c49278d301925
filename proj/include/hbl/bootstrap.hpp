#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hbl/parallel.hpp"
#include "hbl/process.hpp"
#include "hbl/random.hpp"

namespace hbl {

/// One weird-bootstrap replicate. `draws[j]` is dN*(T_j) at the j-th
/// original jump, zeros included; `n_star` drops the zero increments.
struct BootstrapReplicate {
  CountingPath n_star;
  StepFunction a_hat_star;
  std::vector<int> draws;
};

/// Extremes of T*(x) = (A*(x) - A(x)) / sigma(x) over an interval S.
struct SupStatistics {
  double sup_abs;
  double min_t;
  double max_t;
};

/// Scale used for T*: the original sigma(x), or the replicate's own
/// sigma*(x) from the same variance formula applied to dN*.
enum class Studentization { original, replicate };

/// Draws dN*(T_j) ~ Binomial(Y(T_j), dN(T_j)/Y(T_j)) independently at each
/// jump, consuming the stream in jump order.
std::vector<int> weird_draws(std::span<const JumpRecord> jumps, Rng& rng);

BootstrapReplicate weird_resample(const CountingPath& events, const RiskPath& risk, Rng& rng);

/// Exact extremes of T* over S. T* is 0 wherever the scale is 0.
SupStatistics t_star_process(const BootstrapReplicate& replicate, const EstimatePair& original,
                             const TimeInterval& s,
                             Studentization studentization = Studentization::original);

/// Sup statistics for `resamples` replicates; replicate b uses the stream
/// derive_seed(seed, {b}).
std::vector<SupStatistics> bootstrap_sup_statistics(const EstimatePair& original,
                                                    const TimeInterval& s, int resamples,
                                                    std::uint64_t seed,
                                                    Studentization studentization,
                                                    Execution exec = Execution::serial());

}  // namespace hbl

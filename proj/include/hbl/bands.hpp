#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hbl/bootstrap.hpp"
#include "hbl/bridge.hpp"
#include "hbl/process.hpp"

namespace hbl {

enum class BandMethod { B1, B2, HW, EP, AHW, AEP, LHW, LEP };

std::string_view to_string(BandMethod method);
BandMethod parse_band_method(std::string_view name);

bool is_bootstrap(BandMethod method) noexcept;
bool is_transformed(BandMethod method) noexcept;
inline bool is_asymptotic(BandMethod method) noexcept { return !is_bootstrap(method); }

/// Bridge weight behind an asymptotic or transformed method.
Weight weight_for(BandMethod method);

struct BandSpec {
  BandMethod method = BandMethod::B2;
  double theta = 0.05;
  TimeInterval s{0.0, 1.0};
  int b_resamples = 200;
  Studentization studentization = Studentization::replicate;
  int bridge_paths = 100000;
  int bridge_grid = 1000;

  void validate() const;
};

struct CriticalValues {
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<double> t3;
  std::optional<double> k;
  std::optional<double> c1;
  std::optional<double> c2;
};

struct ConfidenceBand {
  BandMethod method;
  double theta;
  TimeInterval s;
  StepFunction lower;
  StepFunction upper;
  CriticalValues critical;
};

// Bootstrap critical values -------------------------------------------------

/// t1: the k-th smallest sup|T*| with k = min(B, ceil((B+1)(1-theta))).
double critical_value_symmetric(std::span<const double> sup_abs_values, double theta);

struct EqualTailedCritical {
  double t2;
  double t3;
  int tail_rank;  // order-statistic rank used in each tail
};

/// (t2, t3) for the equal-tailed band. At tail rank k, t2 is the k-th
/// smallest min T* and t3 the k-th largest max T*; the joint replicate
/// coverage is nonincreasing in k, and the largest k with coverage >= 1-theta
/// is located by bisection over k in [1, ceil((B+1)theta)].
EqualTailedCritical critical_values_equal_tailed(std::span<const SupStatistics> stats,
                                                 double theta);

/// Fraction of replicates with t2 <= min_t and max_t <= t3.
double joint_coverage(std::span<const SupStatistics> stats, double t2, double t3);

// Band construction ---------------------------------------------------------

/// B1 or B2 band from weird-bootstrap replicates drawn with `seed`.
ConfidenceBand band_bootstrap(const EstimatePair& estimate, const BandSpec& spec,
                              std::uint64_t seed, Execution exec = Execution::serial());

/// B1 or B2 band from precomputed replicate statistics.
ConfidenceBand band_bootstrap_from_statistics(const EstimatePair& estimate, const BandSpec& spec,
                                              std::span<const SupStatistics> stats);

/// (c1_hat, c2_hat) with c = n sigma^2 / (1 + n sigma^2) at the ends of S.
std::pair<double, double> bridge_interval(const EstimatePair& estimate, const TimeInterval& s);

/// a_n^{-1} K (1 + a_n^2 sigma^2) / q(a_n^2 sigma^2 / (1 + a_n^2 sigma^2)), a_n = sqrt(n).
double asymptotic_half_width(Weight weight, double k, double sigma_sq, int n);

/// HW or EP band; K comes from a fresh bridge simulation seeded by `seed`.
ConfidenceBand band_asymptotic(const EstimatePair& estimate, const BandSpec& spec,
                               std::uint64_t seed, Execution exec = Execution::serial());
ConfidenceBand band_asymptotic_with_quantile(const EstimatePair& estimate, const BandSpec& spec,
                                             double k);

/// Log (LHW, LEP) and arcsine (AHW, AEP) transformed bands.
ConfidenceBand band_transformed(const EstimatePair& estimate, const BandSpec& spec,
                                std::uint64_t seed, Execution exec = Execution::serial());
ConfidenceBand band_transformed_with_quantile(const EstimatePair& estimate, const BandSpec& spec,
                                              double k);

/// Edges of the transformed band at one point given the untransformed half-width.
std::pair<double, double> log_transformed_edges(double a_hat, double half_width);
std::pair<double, double> arcsine_transformed_edges(double a_hat, double half_width);

/// Dispatches on spec.method.
ConfidenceBand build_band(const EstimatePair& estimate, const BandSpec& spec, std::uint64_t seed,
                          Execution exec = Execution::serial());

}  // namespace hbl

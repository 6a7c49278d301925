#include "hbl/bands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "hbl/error.hpp"

namespace hbl {

namespace {

constexpr BandMethod kAllMethods[] = {BandMethod::B1,  BandMethod::B2,  BandMethod::HW,
                                      BandMethod::EP,  BandMethod::AHW, BandMethod::AEP,
                                      BandMethod::LHW, BandMethod::LEP};

bool is_log(BandMethod m) { return m == BandMethod::LHW || m == BandMethod::LEP; }

// Evaluates edge(a_hat, sigma_sq) at S.start and at every jump of the
// estimate inside (S.start, S.end]; edges are constant in between.
template <class EdgeFn>
std::pair<StepFunction, StepFunction> edges_on(const EstimatePair& est, const TimeInterval& s,
                                               EdgeFn edge) {
  const auto [lo0, hi0] = edge(est.a_hat(s.start), est.sigma_sq(s.start));
  std::vector<double> times;
  std::vector<double> lows;
  std::vector<double> highs;
  const auto breaks = est.a_hat.breakpoints();
  const auto a_vals = est.a_hat.values_after();
  const auto s_vals = est.sigma_sq.values_after();
  for (std::size_t j = 0; j < breaks.size(); ++j) {
    if (breaks[j] <= s.start) continue;
    if (breaks[j] > s.end) break;
    const auto [lo, hi] = edge(a_vals[j], s_vals[j]);
    times.push_back(breaks[j]);
    lows.push_back(lo);
    highs.push_back(hi);
  }
  StepFunction lower(s, lo0, times, std::move(lows));
  StepFunction upper(s, hi0, std::move(times), std::move(highs));
  return {std::move(lower), std::move(upper)};
}

void check_domain(const EstimatePair& est, const TimeInterval& s) {
  if (!est.a_hat.domain().contains(s)) {
    throw DomainError("band interval S lies outside the data range");
  }
}

int jumps_up_to(const EstimatePair& est, double t) {
  int n = 0;
  for (const auto& j : est.jumps) {
    if (j.time > t) break;
    ++n;
  }
  return n;
}

double k_for(const EstimatePair& est, const BandSpec& spec, std::uint64_t seed, Execution exec) {
  const auto [c1, c2] = bridge_interval(est, spec.s);
  return brownian_bridge_sup_quantile(weight_for(spec.method), c1, c2, spec.theta,
                                      spec.bridge_paths, spec.bridge_grid, seed, exec);
}

void require_ep_information(const EstimatePair& est, const BandSpec& spec) {
  if (weight_for(spec.method) == Weight::ep && !(est.sigma_sq(spec.s.start) > 0.0)) {
    throw InvalidInput("EP weight needs sigma^2(S.start) > 0");
  }
}

}  // namespace

std::string_view to_string(BandMethod method) {
  switch (method) {
    case BandMethod::B1: return "B1";
    case BandMethod::B2: return "B2";
    case BandMethod::HW: return "HW";
    case BandMethod::EP: return "EP";
    case BandMethod::AHW: return "AHW";
    case BandMethod::AEP: return "AEP";
    case BandMethod::LHW: return "LHW";
    case BandMethod::LEP: return "LEP";
  }
  return "?";
}

BandMethod parse_band_method(std::string_view name) {
  std::string upper(name);
  for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (BandMethod m : kAllMethods) {
    if (upper == to_string(m)) return m;
  }
  throw InvalidInput("unknown band method '" + std::string(name) + "'");
}

bool is_bootstrap(BandMethod method) noexcept {
  return method == BandMethod::B1 || method == BandMethod::B2;
}

bool is_transformed(BandMethod method) noexcept {
  return method == BandMethod::AHW || method == BandMethod::AEP || is_log(method);
}

Weight weight_for(BandMethod method) {
  switch (method) {
    case BandMethod::HW:
    case BandMethod::AHW:
    case BandMethod::LHW: return Weight::hw;
    case BandMethod::EP:
    case BandMethod::AEP:
    case BandMethod::LEP: return Weight::ep;
    default: throw InvalidInput("bootstrap bands have no bridge weight");
  }
}

void BandSpec::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidInput("theta must lie in (0, 1)");
  if (is_bootstrap(method) && b_resamples < 1) {
    throw InvalidInput("bootstrap bands need at least one resample");
  }
  if (!is_bootstrap(method) && (bridge_paths < 1 || bridge_grid < 1)) {
    throw InvalidInput("asymptotic bands need positive bridge paths and grid");
  }
}

// Bootstrap -----------------------------------------------------------------

double critical_value_symmetric(std::span<const double> sup_abs_values, double theta) {
  if (sup_abs_values.empty()) throw InvalidInput("no bootstrap statistics");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidInput("theta must lie in (0, 1)");
  std::vector<double> v(sup_abs_values.begin(), sup_abs_values.end());
  return empirical_quantile(v, 1.0 - theta);
}

double joint_coverage(std::span<const SupStatistics> stats, double t2, double t3) {
  std::size_t inside = 0;
  for (const auto& st : stats) {
    if (t2 <= st.min_t && st.max_t <= t3) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(stats.size());
}

EqualTailedCritical critical_values_equal_tailed(std::span<const SupStatistics> stats,
                                                 double theta) {
  if (stats.empty()) throw InvalidInput("no bootstrap statistics");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidInput("theta must lie in (0, 1)");
  std::vector<double> mins;
  std::vector<double> maxs;
  mins.reserve(stats.size());
  maxs.reserve(stats.size());
  for (const auto& st : stats) {
    mins.push_back(st.min_t);
    maxs.push_back(st.max_t);
  }
  std::sort(mins.begin(), mins.end());
  std::sort(maxs.begin(), maxs.end(), std::greater<>());

  const double target = 1.0 - theta;
  auto feasible = [&](long k) {
    return joint_coverage(stats, mins[k - 1], maxs[k - 1]) >= target - 1e-12;
  };
  // Rank 1 uses the sample extremes and always covers every replicate.
  long lo = 1;
  long hi = order_statistic_rank(stats.size(), theta);
  while (lo < hi) {
    const long mid = (lo + hi + 1) / 2;
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return {mins[lo - 1], maxs[lo - 1], static_cast<int>(lo)};
}

ConfidenceBand band_bootstrap_from_statistics(const EstimatePair& estimate, const BandSpec& spec,
                                              std::span<const SupStatistics> stats) {
  spec.validate();
  if (!is_bootstrap(spec.method)) throw InvalidInput("not a bootstrap band method");
  check_domain(estimate, spec.s);
  CriticalValues cv;
  double lo_mult = 0.0;  // lower = A - lo_mult * sigma
  double hi_mult = 0.0;  // upper = A + hi_mult * sigma
  if (spec.method == BandMethod::B1) {
    std::vector<double> sup_abs;
    sup_abs.reserve(stats.size());
    for (const auto& st : stats) sup_abs.push_back(st.sup_abs);
    const double t1 = critical_value_symmetric(sup_abs, spec.theta);
    cv.t1 = t1;
    lo_mult = t1;
    hi_mult = t1;
  } else {
    const auto et = critical_values_equal_tailed(stats, spec.theta);
    cv.t2 = et.t2;
    cv.t3 = et.t3;
    lo_mult = et.t3;
    hi_mult = -et.t2;
  }
  auto [lower, upper] = edges_on(estimate, spec.s, [&](double a, double s2) {
    const double sigma = std::sqrt(s2);
    return std::pair{std::max(0.0, a - lo_mult * sigma), std::max(0.0, a + hi_mult * sigma)};
  });
  return {spec.method, spec.theta, spec.s, std::move(lower), std::move(upper), cv};
}

ConfidenceBand band_bootstrap(const EstimatePair& estimate, const BandSpec& spec,
                              std::uint64_t seed, Execution exec) {
  spec.validate();
  if (!is_bootstrap(spec.method)) throw InvalidInput("not a bootstrap band method");
  check_domain(estimate, spec.s);
  if (jumps_up_to(estimate, spec.s.end) == 0) {
    throw DegenerateBand("no events in [0, S.end]; sigma is identically zero on S");
  }
  const auto stats = bootstrap_sup_statistics(estimate, spec.s, spec.b_resamples, seed,
                                              spec.studentization, exec);
  return band_bootstrap_from_statistics(estimate, spec, stats);
}

// Asymptotic ----------------------------------------------------------------

std::pair<double, double> bridge_interval(const EstimatePair& estimate, const TimeInterval& s) {
  check_domain(estimate, s);
  const double n = estimate.n_at_risk_initial;
  auto c = [n](double s2) { return n * s2 / (1.0 + n * s2); };
  return {c(estimate.sigma_sq(s.start)), c(estimate.sigma_sq(s.end))};
}

double asymptotic_half_width(Weight weight, double k, double sigma_sq, int n) {
  if (n < 1) throw InvalidInput("normalizing count must be positive");
  const double a_n = std::sqrt(static_cast<double>(n));
  const double scaled = a_n * a_n * sigma_sq;
  double q = 1.0;
  if (weight == Weight::ep) {
    const double x = scaled / (1.0 + scaled);
    q = 1.0 / std::sqrt(x * (1.0 - x));  // +inf when sigma_sq == 0
  }
  return k * (1.0 + scaled) / (a_n * q);
}

ConfidenceBand band_asymptotic_with_quantile(const EstimatePair& estimate, const BandSpec& spec,
                                             double k) {
  spec.validate();
  if (spec.method != BandMethod::HW && spec.method != BandMethod::EP) {
    throw InvalidInput("not an HW or EP band method");
  }
  check_domain(estimate, spec.s);
  require_ep_information(estimate, spec);
  const Weight weight = weight_for(spec.method);
  const int n = estimate.n_at_risk_initial;
  auto [lower, upper] = edges_on(estimate, spec.s, [&](double a, double s2) {
    const double w = asymptotic_half_width(weight, k, s2, n);
    return std::pair{std::max(0.0, a - w), a + w};
  });
  const auto [c1, c2] = bridge_interval(estimate, spec.s);
  CriticalValues cv;
  cv.k = k;
  cv.c1 = c1;
  cv.c2 = c2;
  return {spec.method, spec.theta, spec.s, std::move(lower), std::move(upper), cv};
}

ConfidenceBand band_asymptotic(const EstimatePair& estimate, const BandSpec& spec,
                               std::uint64_t seed, Execution exec) {
  spec.validate();
  if (spec.method != BandMethod::HW && spec.method != BandMethod::EP) {
    throw InvalidInput("not an HW or EP band method");
  }
  check_domain(estimate, spec.s);
  require_ep_information(estimate, spec);
  return band_asymptotic_with_quantile(estimate, spec, k_for(estimate, spec, seed, exec));
}

// Transformed ---------------------------------------------------------------

std::pair<double, double> log_transformed_edges(double a_hat, double half_width) {
  if (!(a_hat > 0.0)) throw InvalidInput("log-transformed band needs A_hat > 0 on S");
  const double r = half_width / a_hat;
  return {a_hat * std::exp(-r), a_hat * std::exp(r)};
}

std::pair<double, double> arcsine_transformed_edges(double a_hat, double half_width) {
  if (half_width == 0.0) return {a_hat, a_hat};
  const double e = std::exp(-0.5 * a_hat);
  const double centre = std::asin(std::min(e, 1.0));
  const double delta = 0.5 * half_width * e / std::sqrt(-std::expm1(-a_hat));
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  auto back = [](double angle) { return -2.0 * std::log(std::sin(angle)); };
  // The transform is decreasing, so the larger angle gives the lower edge.
  const double lower = back(std::clamp(centre + delta, 0.0, kHalfPi));
  const double upper = back(std::clamp(centre - delta, 0.0, kHalfPi));
  return {std::max(0.0, lower), upper};
}

ConfidenceBand band_transformed_with_quantile(const EstimatePair& estimate, const BandSpec& spec,
                                              double k) {
  spec.validate();
  if (!is_transformed(spec.method)) throw InvalidInput("not a transformed band method");
  check_domain(estimate, spec.s);
  require_ep_information(estimate, spec);
  if (is_log(spec.method) && !(estimate.a_hat(spec.s.start) > 0.0)) {
    throw InvalidInput("log-transformed band needs A_hat > 0 on S");
  }
  const Weight weight = weight_for(spec.method);
  const int n = estimate.n_at_risk_initial;
  const bool log_form = is_log(spec.method);
  auto [lower, upper] = edges_on(estimate, spec.s, [&](double a, double s2) {
    const double w = asymptotic_half_width(weight, k, s2, n);
    return log_form ? log_transformed_edges(a, w) : arcsine_transformed_edges(a, w);
  });
  const auto [c1, c2] = bridge_interval(estimate, spec.s);
  CriticalValues cv;
  cv.k = k;
  cv.c1 = c1;
  cv.c2 = c2;
  return {spec.method, spec.theta, spec.s, std::move(lower), std::move(upper), cv};
}

ConfidenceBand band_transformed(const EstimatePair& estimate, const BandSpec& spec,
                                std::uint64_t seed, Execution exec) {
  spec.validate();
  if (!is_transformed(spec.method)) throw InvalidInput("not a transformed band method");
  check_domain(estimate, spec.s);
  require_ep_information(estimate, spec);
  if (is_log(spec.method) && !(estimate.a_hat(spec.s.start) > 0.0)) {
    throw InvalidInput("log-transformed band needs A_hat > 0 on S");
  }
  return band_transformed_with_quantile(estimate, spec, k_for(estimate, spec, seed, exec));
}

ConfidenceBand build_band(const EstimatePair& estimate, const BandSpec& spec, std::uint64_t seed,
                          Execution exec) {
  if (is_bootstrap(spec.method)) return band_bootstrap(estimate, spec, seed, exec);
  if (is_transformed(spec.method)) return band_transformed(estimate, spec, seed, exec);
  return band_asymptotic(estimate, spec, seed, exec);
}

}  // namespace hbl

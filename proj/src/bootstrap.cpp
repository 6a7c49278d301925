#include "hbl/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "hbl/error.hpp"

namespace hbl {

namespace {

// Cumulative per-jump quantities of the original estimate, shared by every
// replicate of one bootstrap run.
struct JumpTable {
  std::vector<double> a_hat;  // A(T_j)
  std::vector<double> sigma;  // sqrt(sigma^2(T_j))
  std::size_t first_in_s;     // first jump index with T_j > s.start
  std::size_t end_in_s;       // one past the last jump with T_j <= s.end
};

JumpTable make_table(const EstimatePair& original, const TimeInterval& s) {
  if (!original.a_hat.domain().contains(s)) {
    throw DomainError("interval S lies outside the estimate's domain");
  }
  const auto& jumps = original.jumps;
  JumpTable t;
  t.a_hat.assign(original.a_hat.values_after().begin(), original.a_hat.values_after().end());
  t.sigma.reserve(jumps.size());
  for (double v : original.sigma_sq.values_after()) t.sigma.push_back(std::sqrt(v));
  auto by_time = [](const JumpRecord& j, double x) { return j.time <= x; };
  t.first_in_s = static_cast<std::size_t>(
      std::partition_point(jumps.begin(), jumps.end(), [&](const JumpRecord& j) { return by_time(j, s.start); }) -
      jumps.begin());
  t.end_in_s = static_cast<std::size_t>(
      std::partition_point(jumps.begin(), jumps.end(), [&](const JumpRecord& j) { return by_time(j, s.end); }) -
      jumps.begin());
  return t;
}

double studentize(double a_star, double a_hat, double sigma) {
  return sigma > 0.0 ? (a_star - a_hat) / sigma : 0.0;
}

struct Scratch {
  std::vector<double> a_star;
  std::vector<double> sigma_star;
};

// sqrt of sum dN*(Y - dN*) / Y^3 at each jump.
void replicate_sigma(std::span<const JumpRecord> jumps, std::span<const int> draws,
                     std::vector<double>& out) {
  out.resize(draws.size());
  double s2 = 0.0;
  for (std::size_t j = 0; j < draws.size(); ++j) {
    const double y = jumps[j].at_risk;
    const double d = draws[j];
    s2 += d * (y - d) / (y * y * y);
    out[j] = std::sqrt(s2);
  }
}

// Extremes of T* over S given the replicate's cumulative A* at each jump.
SupStatistics extremes(const JumpTable& t, std::span<const double> a_star,
                       std::span<const double> sigma) {
  double lo = 0.0;
  double hi = 0.0;
  if (t.first_in_s > 0) {
    const std::size_t j = t.first_in_s - 1;
    lo = hi = studentize(a_star[j], t.a_hat[j], sigma[j]);
  }
  for (std::size_t j = t.first_in_s; j < t.end_in_s; ++j) {
    const double v = studentize(a_star[j], t.a_hat[j], sigma[j]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {std::max(std::abs(lo), std::abs(hi)), lo, hi};
}

SupStatistics one_replicate(const EstimatePair& original, const JumpTable& table,
                            Studentization studentization, std::uint64_t seed, int index,
                            Scratch& scratch) {
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(index)}));
  const auto draws = weird_draws(original.jumps, rng);
  scratch.a_star.resize(draws.size());
  double a = 0.0;
  for (std::size_t j = 0; j < draws.size(); ++j) {
    a += static_cast<double>(draws[j]) / static_cast<double>(original.jumps[j].at_risk);
    scratch.a_star[j] = a;
  }
  if (studentization == Studentization::original) return extremes(table, scratch.a_star, table.sigma);
  replicate_sigma(original.jumps, draws, scratch.sigma_star);
  return extremes(table, scratch.a_star, scratch.sigma_star);
}

}  // namespace

std::vector<int> weird_draws(std::span<const JumpRecord> jumps, Rng& rng) {
  std::vector<int> draws;
  draws.reserve(jumps.size());
  for (const auto& j : jumps) {
    const double p = static_cast<double>(j.count) / static_cast<double>(j.at_risk);
    draws.push_back(binomial(rng, j.at_risk, p));
  }
  return draws;
}

BootstrapReplicate weird_resample(const CountingPath& events, const RiskPath& risk, Rng& rng) {
  const auto jumps = pair_jumps_with_risk(events, risk);
  auto draws = weird_draws(jumps, rng);

  std::vector<Jump> kept;
  std::vector<double> times;
  std::vector<double> values;
  double a = 0.0;
  for (std::size_t j = 0; j < jumps.size(); ++j) {
    a += static_cast<double>(draws[j]) / static_cast<double>(jumps[j].at_risk);
    times.push_back(jumps[j].time);
    values.push_back(a);
    if (draws[j] > 0) kept.push_back({jumps[j].time, draws[j]});
  }
  return {CountingPath(std::move(kept)),
          StepFunction(risk.domain(), 0.0, std::move(times), std::move(values)), std::move(draws)};
}

SupStatistics t_star_process(const BootstrapReplicate& replicate, const EstimatePair& original,
                             const TimeInterval& s, Studentization studentization) {
  const auto& a_hat = original.a_hat;
  if (!a_hat.domain().contains(s) || !replicate.a_hat_star.domain().contains(s)) {
    throw DomainError("interval S lies outside the estimate's domain");
  }
  if (replicate.draws.size() != original.jumps.size()) {
    throw InvalidInput("replicate does not match the original jumps");
  }
  std::optional<StepFunction> sigma_star;
  if (studentization == Studentization::replicate) {
    std::vector<double> sd;
    replicate_sigma(original.jumps, replicate.draws, sd);
    std::vector<double> times;
    for (const auto& j : original.jumps) times.push_back(j.time);
    sigma_star.emplace(a_hat.domain(), 0.0, std::move(times), std::move(sd));
  }
  auto t_at = [&](double x) {
    const double sigma = sigma_star ? (*sigma_star)(x) : std::sqrt(original.sigma_sq(x));
    return studentize(replicate.a_hat_star(x), a_hat(x), sigma);
  };
  double lo = t_at(s.start);
  double hi = lo;
  for (double b : a_hat.breakpoints()) {
    if (b <= s.start) continue;
    if (b > s.end) break;
    const double v = t_at(b);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {std::max(std::abs(lo), std::abs(hi)), lo, hi};
}

std::vector<SupStatistics> bootstrap_sup_statistics(const EstimatePair& original,
                                                    const TimeInterval& s, int resamples,
                                                    std::uint64_t seed,
                                                    Studentization studentization,
                                                    Execution exec) {
  if (resamples < 1) throw InvalidInput("bootstrap needs at least one resample");
  const JumpTable table = make_table(original, s);
  std::vector<SupStatistics> out(static_cast<std::size_t>(resamples));

  if (!exec.parallel) {
    Scratch scratch;
    for (int b = 0; b < resamples; ++b) out[b] = one_replicate(original, table, studentization, seed, b, scratch);
    return out;
  }

#pragma omp parallel num_threads(resolve_threads(exec.threads))
  {
    Scratch scratch;
#pragma omp for schedule(static)
    for (int b = 0; b < resamples; ++b) out[b] = one_replicate(original, table, studentization, seed, b, scratch);
  }
  return out;
}

}  // namespace hbl

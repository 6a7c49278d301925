#include "hbl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hbl/error.hpp"

namespace hbl {

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kBootstrapStream = 2;
constexpr std::uint64_t kBankStream = 3;

double cube(double x) { return x * x * x; }

}  // namespace

std::string_view to_string(Intensity tag) {
  switch (tag) {
    case Intensity::alpha1: return "alpha1";
    case Intensity::alpha2: return "alpha2";
    case Intensity::alpha3: return "alpha3";
    case Intensity::alpha4: return "alpha4";
  }
  return "?";
}

Intensity parse_intensity(std::string_view name) {
  for (Intensity t : {Intensity::alpha1, Intensity::alpha2, Intensity::alpha3, Intensity::alpha4}) {
    const auto full = to_string(t);
    if (name == full || name == full.substr(full.size() - 1)) return t;
  }
  throw InvalidInput("unknown intensity '" + std::string(name) + "'");
}

double IntensityModel::operator()(double t) const {
  const double d = t - 0.5;
  double v = 0.0;
  switch (tag) {
    case Intensity::alpha1: v = 5.0 / 3.0; break;
    case Intensity::alpha2: v = 5.0 / 6.0 + 10.0 * d * d; break;
    case Intensity::alpha3: v = 5.0 / 3.0 + 10.0 * cube(d); break;
    case Intensity::alpha4: v = 2.5 - 10.0 * d * d; break;
  }
  return scale * v;
}

double IntensityModel::max_on(double a, double b) const {
  switch (tag) {
    case Intensity::alpha1: return (*this)(a);
    case Intensity::alpha2: return std::max((*this)(a), (*this)(b));  // convex
    case Intensity::alpha3: return (*this)(b);                        // increasing
    case Intensity::alpha4:
      if (a <= 0.5 && 0.5 <= b) return (*this)(0.5);
      return std::max((*this)(a), (*this)(b));
  }
  return 0.0;
}

double true_integrated_hazard(Intensity tag, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("integrated hazard defined on [0, 1], got " + std::to_string(t));
  }
  const double d = t - 0.5;
  switch (tag) {
    case Intensity::alpha1: return 5.0 * t / 3.0;
    case Intensity::alpha2: return 5.0 * t / 6.0 + (10.0 / 3.0) * (cube(d) + 0.125);
    case Intensity::alpha3: return 5.0 * t / 3.0 + 2.5 * (d * d * d * d - 0.0625);
    case Intensity::alpha4: return 2.5 * t - (10.0 / 3.0) * (cube(d) + 0.125);
  }
  return 0.0;
}

RiskPath generate_risk_path(int y0, double termination_mean, double horizon, Rng& rng) {
  if (y0 < 0) throw InvalidInput("initial number at risk must be >= 0");
  if (!(termination_mean > 0.0)) throw InvalidInput("termination mean must be positive");
  const TimeInterval domain(0.0, horizon);
  std::vector<double> ends(static_cast<std::size_t>(y0));
  for (auto& e : ends) {
    e = exponential(rng, termination_mean);
    if (e <= 0.0) e = std::nextafter(0.0, 1.0);
  }
  std::sort(ends.begin(), ends.end());

  std::vector<double> breaks;
  std::vector<double> remaining;
  for (std::size_t i = 0; i < ends.size() && ends[i] <= horizon; ++i) {
    const double left = static_cast<double>(ends.size() - i - 1);
    if (!breaks.empty() && breaks.back() == ends[i]) {
      remaining.back() = left;
    } else {
      breaks.push_back(ends[i]);
      remaining.push_back(left);
    }
  }
  return RiskPath(StepFunction(domain, y0, std::move(breaks), std::move(remaining)));
}

CountingPath simulate_counting(const IntensityModel& alpha, const RiskPath& risk, Rng& rng) {
  const auto& y = risk.function();
  const auto breaks = y.breakpoints();
  const auto& domain = y.domain();
  std::vector<Jump> jumps;
  for (std::size_t seg = 0; seg <= breaks.size(); ++seg) {
    const double u = seg == 0 ? domain.start : breaks[seg - 1];
    const double v = seg == breaks.size() ? domain.end : breaks[seg];
    const double at_risk = y.segment_value(seg);
    if (at_risk <= 0.0 || !(v > u)) continue;
    const double bound = alpha.max_on(u, v);
    if (!(bound > 0.0)) continue;
    const double rate = at_risk * bound;
    double t = u;
    while (true) {
      t += exponential(rng, 1.0 / rate);
      if (!(t < v)) break;
      if (uniform01(rng) * bound < alpha(t) && t > u) jumps.push_back({t, 1});
    }
  }
  return CountingPath(std::move(jumps));
}

Coverage classify_band(const ConfidenceBand& band, const std::function<double(double)>& truth,
                       const TimeInterval& s) {
  if (!band.s.contains(s)) throw DomainError("classification interval outside the band");
  std::vector<double> points{s.start};
  for (const auto* edge : {&band.lower, &band.upper}) {
    for (double b : edge->breakpoints()) {
      if (b > s.start && b <= s.end) points.push_back(b);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  for (std::size_t i = 0; i < points.size(); ++i) {
    const double u = points[i];
    const double v = i + 1 < points.size() ? points[i + 1] : s.end;
    if (truth(u) < band.lower(u)) return Coverage::left_miss;
    if (truth(v) > band.upper(u)) return Coverage::right_miss;
  }
  return Coverage::covered;
}

Coverage classify_band(const ConfidenceBand& band, Intensity alpha, const TimeInterval& s) {
  return classify_band(band, [alpha](double t) { return true_integrated_hazard(alpha, t); }, s);
}

void ExperimentConfig::validate() const {
  if (alphas.empty() || y0_values.empty() || methods.empty()) {
    throw InvalidInput("experiment needs at least one intensity, y0 and method");
  }
  for (int y : y0_values) {
    if (y < 1) throw InvalidInput("initial numbers at risk must be positive");
  }
  if (!(termination_mean > 0.0)) throw InvalidInput("termination mean must be positive");
  if (s.end > 1.0) throw InvalidInput("S must lie inside [0, 1]");
  if (b_resamples < 1) throw InvalidInput("bootstrap resamples must be positive");
  if (iterations < 0) throw InvalidInput("iterations must be >= 0");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidInput("theta must lie in (0, 1)");
  if (bridge_paths < 1 || bridge_cells < 2) throw InvalidInput("invalid bridge bank size");
}

const CoverageCell& CoverageTable::at(Intensity alpha, int y0, BandMethod method) const {
  for (const auto& row : rows) {
    if (row.alpha == alpha && row.y0 == y0 && row.method == method) return row;
  }
  throw InvalidInput("no coverage cell for " + std::string(to_string(alpha)) + ", y0 " +
                     std::to_string(y0) + ", " + std::string(to_string(method)));
}

std::vector<TrialOutcome> run_trial(const ExperimentConfig& config, Intensity alpha, int y0,
                                    int iteration, const BridgeBank* bank) {
  const auto a = static_cast<std::uint64_t>(alpha);
  const auto y = static_cast<std::uint64_t>(y0);
  const auto it = static_cast<std::uint64_t>(iteration);

  Rng rng = make_rng(config.master_seed, {kDataStream, a, y, it});
  const RiskPath risk = generate_risk_path(y0, config.termination_mean, 1.0, rng);
  const CountingPath events = simulate_counting(IntensityModel{alpha}, risk, rng);
  const EstimatePair est = nelson_aalen(events, risk);

  const bool informative = !est.jumps.empty() && est.jumps.front().time <= config.s.end;
  std::optional<std::vector<SupStatistics>> replicates;
  std::optional<std::pair<double, double>> quantiles;

  std::vector<TrialOutcome> out;
  out.reserve(config.methods.size());
  for (BandMethod method : config.methods) {
    BandSpec spec;
    spec.method = method;
    spec.theta = config.theta;
    spec.s = config.s;
    spec.b_resamples = config.b_resamples;
    spec.studentization = config.studentization;
    try {
      std::optional<ConfidenceBand> band;
      if (is_bootstrap(method)) {
        if (!informative) throw DegenerateBand("no events in [0, S.end]");
        if (!replicates) {
          replicates = bootstrap_sup_statistics(
              est, config.s, config.b_resamples,
              derive_seed(config.master_seed, {kBootstrapStream, a, y, it}),
              config.studentization);
        }
        band = band_bootstrap_from_statistics(est, spec, *replicates);
      } else {
        if (bank == nullptr) throw InvalidInput("asymptotic bands need a bridge bank");
        if (!quantiles) {
          const auto [c1, c2] = bridge_interval(est, config.s);
          quantiles = bank->quantiles(c1, c2, config.theta);
        }
        const double k = weight_for(method) == Weight::hw ? quantiles->first : quantiles->second;
        band = is_transformed(method) ? band_transformed_with_quantile(est, spec, k)
                                      : band_asymptotic_with_quantile(est, spec, k);
      }
      switch (classify_band(*band, alpha, config.s)) {
        case Coverage::covered: out.push_back(TrialOutcome::covered); break;
        case Coverage::left_miss: out.push_back(TrialOutcome::left_miss); break;
        case Coverage::right_miss: out.push_back(TrialOutcome::right_miss); break;
      }
    } catch (const Error&) {
      out.push_back(TrialOutcome::degenerate);
    }
  }
  return out;
}

CoverageTable coverage_experiment(const ExperimentConfig& config, Execution exec) {
  config.validate();
  const bool needs_bank = std::any_of(config.methods.begin(), config.methods.end(),
                                      [](BandMethod m) { return !is_bootstrap(m); });
  const std::size_t m_count = config.methods.size();
  CoverageTable table;
  if (config.iterations == 0) return table;

  for (Intensity alpha : config.alphas) {
    for (int y0 : config.y0_values) {
      std::optional<BridgeBank> bank;
      if (needs_bank) {
        bank.emplace(config.bridge_paths, config.bridge_cells,
                     derive_seed(config.master_seed, {kBankStream, static_cast<std::uint64_t>(alpha),
                                                      static_cast<std::uint64_t>(y0)}),
                     exec);
      }
      const BridgeBank* bank_ptr = bank ? &*bank : nullptr;
      std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.iterations) * m_count);
      auto trial = [&](int i) {
        const auto r = run_trial(config, alpha, y0, i, bank_ptr);
        std::copy(r.begin(), r.end(), outcomes.begin() + static_cast<std::ptrdiff_t>(i * m_count));
      };
      if (!exec.parallel) {
        for (int i = 0; i < config.iterations; ++i) trial(i);
      } else {
#pragma omp parallel for schedule(dynamic, 16) num_threads(resolve_threads(exec.threads))
        for (int i = 0; i < config.iterations; ++i) trial(i);
      }

      for (std::size_t m = 0; m < m_count; ++m) {
        CoverageCell cell{alpha, y0, config.methods[m]};
        cell.iterations = config.iterations;
        for (int i = 0; i < config.iterations; ++i) {
          switch (outcomes[static_cast<std::size_t>(i) * m_count + m]) {
            case TrialOutcome::covered: ++cell.covered; break;
            case TrialOutcome::left_miss: ++cell.left; break;
            case TrialOutcome::right_miss: ++cell.right; break;
            case TrialOutcome::degenerate: ++cell.degenerate; break;
          }
        }
        table.rows.push_back(cell);
      }
    }
  }
  return table;
}

}  // namespace hbl

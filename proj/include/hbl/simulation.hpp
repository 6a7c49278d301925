#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "hbl/bands.hpp"
#include "hbl/parallel.hpp"
#include "hbl/process.hpp"
#include "hbl/random.hpp"

namespace hbl {

enum class Intensity { alpha1, alpha2, alpha3, alpha4 };

std::string_view to_string(Intensity tag);
Intensity parse_intensity(std::string_view name);

/// Hazard alpha(t) on [0, 1], optionally scaled.
struct IntensityModel {
  Intensity tag = Intensity::alpha1;
  double scale = 1.0;

  double operator()(double t) const;
  /// max of alpha over [a, b], from the monotone pieces of each curve.
  double max_on(double a, double b) const;
};

/// A(t) = int_0^t alpha(s) ds in closed form (unscaled). Throws DomainError
/// outside [0, 1].
double true_integrated_hazard(Intensity tag, double t);

/// Y(t) = #{i : E_i > t} for y0 exponential termination times with the given mean.
RiskPath generate_risk_path(int y0, double termination_mean, double horizon, Rng& rng);

/// Point process with intensity alpha(t) Y(t), by thinning on each constant
/// segment of Y. Y itself is not reduced by events.
CountingPath simulate_counting(const IntensityModel& alpha, const RiskPath& risk, Rng& rng);

enum class Coverage { covered, left_miss, right_miss };

/// Checks whether the continuous nondecreasing curve `truth` stays inside
/// the band on S. A lower-edge violation can first occur only where a
/// constant segment starts; an upper-edge violation shows up at the right
/// end of the segment. Scanning segments in time order therefore finds the
/// earliest violation, and a left miss wins a tie within a segment.
Coverage classify_band(const ConfidenceBand& band, const std::function<double(double)>& truth,
                       const TimeInterval& s);
Coverage classify_band(const ConfidenceBand& band, Intensity alpha, const TimeInterval& s);

struct ExperimentConfig {
  std::vector<Intensity> alphas{Intensity::alpha1, Intensity::alpha2, Intensity::alpha3,
                                Intensity::alpha4};
  std::vector<int> y0_values{25, 50, 75};
  double termination_mean = 1.0;
  TimeInterval s{0.2, 0.8};
  int b_resamples = 200;
  Studentization studentization = Studentization::replicate;
  int iterations = 10000;
  double theta = 0.05;
  std::vector<BandMethod> methods{BandMethod::HW, BandMethod::EP, BandMethod::B1, BandMethod::B2};
  std::uint64_t master_seed = 20240501;
  // Bridge bank shared by all trials of one (alpha, y0) cell.
  int bridge_paths = 10000;
  int bridge_cells = 1000;

  void validate() const;
};

struct CoverageCell {
  Intensity alpha;
  int y0;
  BandMethod method;
  int iterations = 0;
  int covered = 0;
  int left = 0;
  int right = 0;
  int degenerate = 0;

  double pct(int count) const { return iterations == 0 ? 0.0 : 100.0 * count / iterations; }
  double coverage_pct() const { return pct(covered); }
  double left_pct() const { return pct(left); }
  double right_pct() const { return pct(right); }
  double degenerate_pct() const { return pct(degenerate); }
};

struct CoverageTable {
  std::vector<CoverageCell> rows;

  const CoverageCell& at(Intensity alpha, int y0, BandMethod method) const;
};

/// Outcome of one method in one trial.
enum class TrialOutcome : std::uint8_t { covered, left_miss, right_miss, degenerate };

/// Runs a single trial of an (alpha, y0) cell for every configured method.
/// The simulated data depend only on (master_seed, alpha, y0, iteration), so
/// all methods are judged on the same sample.
std::vector<TrialOutcome> run_trial(const ExperimentConfig& config, Intensity alpha, int y0,
                                    int iteration, const BridgeBank* bank);

CoverageTable coverage_experiment(const ExperimentConfig& config,
                                  Execution exec = Execution::serial());

}  // namespace hbl

#pragma once

#include <span>
#include <vector>

#include "hbl/step_function.hpp"

namespace hbl {

struct Jump {
  double time;
  int count;
};

/// Observed counting process N: strictly increasing jump times with
/// positive integer increments.
class CountingPath {
 public:
  CountingPath() = default;
  explicit CountingPath(std::vector<Jump> jumps);

  std::span<const Jump> jumps() const noexcept { return jumps_; }
  std::size_t size() const noexcept { return jumps_.size(); }
  bool empty() const noexcept { return jumps_.empty(); }

  /// N(t) = sum of increments at jump times <= t.
  int value_at(double t) const noexcept;
  int total() const noexcept;

 private:
  std::vector<Jump> jumps_;
};

/// At-risk process Y, stored right-continuously as #{subjects remaining after t}.
/// risk_at(t) returns the left limit, i.e. the number at risk just before t.
class RiskPath {
 public:
  explicit RiskPath(StepFunction remaining);

  int risk_at(double t) const;
  int initial() const noexcept { return static_cast<int>(remaining_.initial_value()); }
  const StepFunction& function() const noexcept { return remaining_; }
  const TimeInterval& domain() const noexcept { return remaining_.domain(); }

 private:
  StepFunction remaining_;
};

/// One jump of N together with the number at risk just before it.
struct JumpRecord {
  double time;
  int count;
  int at_risk;
};

/// Nelson-Aalen estimate and its variance estimate. Both step functions share
/// the jump times of N as breakpoints.
struct EstimatePair {
  StepFunction a_hat;
  StepFunction sigma_sq;
  int n_at_risk_initial;
  std::vector<JumpRecord> jumps;
};

/// Pairs each jump of `events` with risk_at(T_j). Throws InvalidInput when
/// Y(T_j) < dN(T_j) or a jump lies outside the risk domain.
std::vector<JumpRecord> pair_jumps_with_risk(const CountingPath& events, const RiskPath& risk);

EstimatePair nelson_aalen(const CountingPath& events, const RiskPath& risk);

enum class Status { event, censored };

struct SurvivalRecord {
  double time;
  Status status;
};

struct ObservedProcess {
  CountingPath events;
  RiskPath risk;
};

/// Y(t) = #{X_i >= t}; N jumps at distinct event times. Events at a tied
/// time are counted before censorings, so censored subjects stay at risk at
/// their own censoring time.
ObservedProcess build_from_censored_sample(std::span<const SurvivalRecord> records);

}  // namespace hbl

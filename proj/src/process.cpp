#include "hbl/process.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "hbl/error.hpp"

namespace hbl {

CountingPath::CountingPath(std::vector<Jump> jumps) : jumps_(std::move(jumps)) {
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    if (jumps_[i].count < 1) throw InvalidInput("counting path: increments must be >= 1");
    if (!std::isfinite(jumps_[i].time)) throw InvalidInput("counting path: non-finite time");
    if (i > 0 && !(jumps_[i].time > jumps_[i - 1].time)) {
      throw InvalidInput("counting path: jump times must be strictly increasing");
    }
  }
}

int CountingPath::value_at(double t) const noexcept {
  int n = 0;
  for (const auto& j : jumps_) {
    if (j.time > t) break;
    n += j.count;
  }
  return n;
}

int CountingPath::total() const noexcept {
  int n = 0;
  for (const auto& j : jumps_) n += j.count;
  return n;
}

RiskPath::RiskPath(StepFunction remaining) : remaining_(std::move(remaining)) {
  auto check = [](double v) {
    if (v < 0.0 || v != std::floor(v)) {
      throw InvalidInput("risk path: values must be nonnegative integers");
    }
  };
  check(remaining_.initial_value());
  for (double v : remaining_.values_after()) check(v);
  if (!remaining_.is_nonincreasing()) throw InvalidInput("risk path must be nonincreasing");
}

int RiskPath::risk_at(double t) const { return static_cast<int>(remaining_.left_limit(t)); }

std::vector<JumpRecord> pair_jumps_with_risk(const CountingPath& events, const RiskPath& risk) {
  std::vector<JumpRecord> out;
  out.reserve(events.size());
  for (const auto& j : events.jumps()) {
    if (!risk.domain().contains(j.time) || j.time <= risk.domain().start) {
      throw InvalidInput("jump at " + std::to_string(j.time) + " outside the risk domain");
    }
    const int y = risk.risk_at(j.time);
    if (y == 0) throw InvalidInput("jump at " + std::to_string(j.time) + " with nobody at risk");
    if (j.count > y) {
      throw InvalidInput("jump at " + std::to_string(j.time) + " exceeds the number at risk");
    }
    out.push_back({j.time, j.count, y});
  }
  return out;
}

EstimatePair nelson_aalen(const CountingPath& events, const RiskPath& risk) {
  auto jumps = pair_jumps_with_risk(events, risk);
  std::vector<double> times;
  std::vector<double> a_values;
  std::vector<double> s_values;
  times.reserve(jumps.size());
  a_values.reserve(jumps.size());
  s_values.reserve(jumps.size());

  double a = 0.0;
  double s2 = 0.0;
  for (const auto& j : jumps) {
    const double y = j.at_risk;
    a += static_cast<double>(j.count) / y;
    s2 += static_cast<double>(j.count) * static_cast<double>(j.at_risk - j.count) / (y * y * y);
    times.push_back(j.time);
    a_values.push_back(a);
    s_values.push_back(s2);
  }
  StepFunction a_hat(risk.domain(), 0.0, times, std::move(a_values));
  StepFunction sigma_sq(risk.domain(), 0.0, std::move(times), std::move(s_values));
  return {std::move(a_hat), std::move(sigma_sq), risk.initial(), std::move(jumps)};
}

ObservedProcess build_from_censored_sample(std::span<const SurvivalRecord> records) {
  if (records.empty()) throw InvalidInput("censored sample is empty");

  struct Tally {
    int events = 0;
    int total = 0;
  };
  std::map<double, Tally> by_time;
  for (const auto& r : records) {
    if (!std::isfinite(r.time) || r.time <= 0.0) {
      throw InvalidInput("survival times must be positive, got " + std::to_string(r.time));
    }
    auto& t = by_time[r.time];
    ++t.total;
    if (r.status == Status::event) ++t.events;
  }

  const double horizon = by_time.rbegin()->first;
  std::vector<Jump> jumps;
  std::vector<double> breaks;
  std::vector<double> remaining;
  int left = static_cast<int>(records.size());
  for (const auto& [time, tally] : by_time) {
    if (tally.events > 0) jumps.push_back({time, tally.events});
    left -= tally.total;
    breaks.push_back(time);
    remaining.push_back(left);
  }
  StepFunction y(TimeInterval(0.0, horizon), static_cast<double>(records.size()),
                 std::move(breaks), std::move(remaining));
  return {CountingPath(std::move(jumps)), RiskPath(std::move(y))};
}

}  // namespace hbl

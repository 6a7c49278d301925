#include "hbl/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hbl/error.hpp"

namespace hbl {

TimeInterval::TimeInterval(double s, double e) : start(s), end(e) {
  if (!std::isfinite(start) || !std::isfinite(end) || !(start < end) || start < 0.0) {
    throw InvalidInput("time interval requires 0 <= start < end, got [" + std::to_string(s) +
                       ", " + std::to_string(e) + "]");
  }
}

StepFunction::StepFunction(TimeInterval domain, double initial_value,
                           std::vector<double> breakpoints, std::vector<double> values_after)
    : domain_(domain),
      initial_(initial_value),
      breakpoints_(std::move(breakpoints)),
      values_(std::move(values_after)) {
  if (breakpoints_.size() != values_.size()) {
    throw InvalidInput("step function: breakpoint and value counts differ");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double b = breakpoints_[i];
    if (!(b > domain_.start) || b > domain_.end) {
      throw InvalidInput("step function: breakpoint outside (start, end]");
    }
    if (i > 0 && !(b > breakpoints_[i - 1])) {
      throw InvalidInput("step function: breakpoints must be strictly increasing");
    }
  }
}

StepFunction StepFunction::constant(TimeInterval domain, double value) {
  return StepFunction(domain, value, {}, {});
}

void StepFunction::check_domain(double t) const {
  if (!domain_.contains(t)) {
    throw DomainError("step function evaluated at " + std::to_string(t) + " outside [" +
                      std::to_string(domain_.start) + ", " + std::to_string(domain_.end) + "]");
  }
}

std::size_t StepFunction::segment_index(double t) const {
  check_domain(t);
  return static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin());
}

double StepFunction::segment_value(std::size_t index) const {
  return index == 0 ? initial_ : values_.at(index - 1);
}

double StepFunction::operator()(double t) const { return segment_value(segment_index(t)); }

double StepFunction::left_limit(double t) const {
  check_domain(t);
  const auto idx = static_cast<std::size_t>(
      std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin());
  return segment_value(idx);
}

bool StepFunction::is_nondecreasing() const noexcept {
  double prev = initial_;
  for (double v : values_) {
    if (v < prev) return false;
    prev = v;
  }
  return true;
}

bool StepFunction::is_nonincreasing() const noexcept {
  double prev = initial_;
  for (double v : values_) {
    if (v > prev) return false;
    prev = v;
  }
  return true;
}

}  // namespace hbl

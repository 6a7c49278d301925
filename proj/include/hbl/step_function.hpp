#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hbl {

/// Closed time interval [start, end] with finite endpoints and start < end.
struct TimeInterval {
  double start;
  double end;

  TimeInterval(double start, double end);

  bool contains(double t) const noexcept { return t >= start && t <= end; }
  bool contains(const TimeInterval& other) const noexcept {
    return other.start >= start && other.end <= end;
  }
  double length() const noexcept { return end - start; }
};

/// Right-continuous piecewise-constant function on a closed interval.
///
/// The function equals `initial_value` on [domain.start, b_0) and
/// `values_after[i]` on [b_i, b_{i+1}). Breakpoints are strictly increasing
/// and lie in (domain.start, domain.end].
class StepFunction {
 public:
  StepFunction(TimeInterval domain, double initial_value, std::vector<double> breakpoints,
               std::vector<double> values_after);

  static StepFunction constant(TimeInterval domain, double value);

  /// Right-continuous evaluation. Throws DomainError outside the domain.
  double operator()(double t) const;

  /// Value in force just before t (equals f(t) unless t is a breakpoint).
  double left_limit(double t) const;

  /// Index of the constant segment containing t: 0 for the initial segment,
  /// i + 1 for [b_i, b_{i+1}).
  std::size_t segment_index(double t) const;
  double segment_value(std::size_t index) const;
  std::size_t segment_count() const noexcept { return breakpoints_.size() + 1; }

  const TimeInterval& domain() const noexcept { return domain_; }
  double initial_value() const noexcept { return initial_; }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values_after() const noexcept { return values_; }

  bool is_nondecreasing() const noexcept;
  bool is_nonincreasing() const noexcept;

 private:
  void check_domain(double t) const;

  TimeInterval domain_;
  double initial_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

inline double evaluate(const StepFunction& f, double t) { return f(t); }

}  // namespace hbl

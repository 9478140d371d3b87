#pragma once

#include <utility>
#include <vector>

#include "repremia/dist.hpp"

namespace repremia {

/// Continuous piecewise-linear function on [0, inf).
///
/// Stored as the value at 0, strictly increasing knots starting at 0, and the
/// slope on each [knot_i, knot_{i+1}); the last slope extends to infinity.
/// Indemnities, realized premiums and the insurer/reinsurer positions are all
/// of this form, which keeps every expectation and distortion integral an
/// exact sum over segments.
class PiecewiseLinear {
 public:
  /// The zero function.
  PiecewiseLinear();
  PiecewiseLinear(double value0, std::vector<double> knots,
                  std::vector<double> slopes);

  /// value0 + sum_i weight_i * (x - at_i)_+ ; ramps at +inf are ignored.
  static PiecewiseLinear from_ramps(
      double value0, const std::vector<std::pair<double, double>>& ramps);

  static PiecewiseLinear constant(double c) { return {c, {0.0}, {0.0}}; }

  double operator()(double x) const;
  double value0() const { return value0_; }

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& slopes() const { return slopes_; }
  std::size_t segment_count() const { return knots_.size(); }
  double segment_begin(std::size_t i) const { return knots_[i]; }
  /// +inf for the last segment.
  double segment_end(std::size_t i) const;
  /// Slope of the segment containing x (right derivative).
  double slope_at(double x) const;

  bool nondecreasing() const;

  /// sup{x >= 0 : f(x) <= level} for a nondecreasing f; +inf when f never
  /// exceeds level, 0 when f(0) > level.
  double sup_level(double level) const;

  /// Merge adjacent segments with identical slopes.
  PiecewiseLinear simplified() const;

  PiecewiseLinear operator+(const PiecewiseLinear& other) const;
  PiecewiseLinear operator-(const PiecewiseLinear& other) const;
  PiecewiseLinear scaled(double c) const;
  PiecewiseLinear shifted(double k) const;

  /// E[f(X)] = f(0) + sum slope_k * integral of S over segment k.
  double expectation(const LossModel& m) const;

  /// E[(f(X) - t)_+] for a nondecreasing f, exact from segment integrals.
  double stop_loss_transform(const LossModel& m, double t) const;

  /// sup over x >= 0 of |f(x) - g(x)|: attained at a knot of either
  /// function, or +inf when the final slopes differ.
  friend double max_abs_difference(const PiecewiseLinear& f,
                                   const PiecewiseLinear& g);

 private:
  double value0_;
  std::vector<double> knots_;
  std::vector<double> slopes_;
  std::vector<double> values_;  // f at each knot
};

}  // namespace repremia

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "repremia/dist.hpp"
#include "repremia/piecewise.hpp"
#include "repremia/scheme.hpp"

namespace repremia {

enum class Family { StopLoss, I1, I2, S3, General };

std::string_view to_string(Family f);
Family family_from_string(std::string_view s);

struct StopLossLayout {
  double d = 0.0;
};

/// (x - d1)_+ - (x - d1 - width)_+ + (x - d2)_+. width is d_I for the I1
/// family and u_I for I2. An empty d2 means there is no upper layer.
struct TwoLayerLayout {
  double d1 = 0.0;
  double width = 0.0;
  std::optional<double> d2;
};

/// (x-a)_+ - (x-b)_+ + (x-c)_+ - (x-d)_+ + (x-e)_+ with
/// a <= b <= c <= d <= e; an empty e means no unlimited top layer.
struct ThreeLayerLayout {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  std::optional<double> e;
};

using Layout =
    std::variant<std::monostate, StopLossLayout, TwoLayerLayout, ThreeLayerLayout>;

/// Feasible ceded-loss function: continuous, piecewise linear, I(0) = 0 and
/// every slope in [0, 1], so 0 <= I(x) <= x and I is 1-Lipschitz.
class Indemnity {
 public:
  static Indemnity zero();
  static Indemnity full();
  static Indemnity stop_loss(double d);
  static Indemnity two_layer(Family family, TwoLayerLayout layout);
  static Indemnity three_layer(ThreeLayerLayout layout);
  static Indemnity general(PiecewiseLinear f);
  /// Breakpoints as (x, slope after x); the first must be at x = 0.
  static Indemnity general(const std::vector<std::pair<double, double>>& breakpoints);

  Family family() const { return family_; }
  const Layout& layout() const { return layout_; }
  const PiecewiseLinear& function() const { return f_; }

  double evaluate(double x) const { return f_(x); }
  double operator()(double x) const { return f_(x); }
  double retained(double x) const { return x - f_(x); }

  bool is_zero() const;

 private:
  Indemnity(Family family, Layout layout, PiecewiseLinear f);

  Family family_;
  Layout layout_;
  PiecewiseLinear f_;
};

/// E[I(X)] as a sum of slope-weighted layer integrals.
double ceded_mean(const Indemnity& I, const LossModel& m);

/// Member of I1 with ceded mean a and first layer starting at d1. The upper
/// deductible d2 solves the mean constraint; d1 must lie in [0, d~] where
/// E[(X - d~)_+] = a. Throws InfeasibleError otherwise.
Indemnity complete_I1(const LossModel& m, const PremiumParams& p, double a,
                      double d1);

/// Member of I2 with ceded mean a and first layer of width u_I starting at
/// d1. Feasible d1 lie in [i2_lower_bound(m, p, a), d~].
Indemnity complete_I2(const LossModel& m, const PremiumParams& p, double a,
                      double d1);

/// Smallest d1 for which the first I2 layer does not already exceed a.
double i2_lower_bound(const LossModel& m, const PremiumParams& p, double a);

struct Thresholds {
  double x_d;
  double x_u;
};

/// x_d = sup{x : I(x) <= d_I} and x_u = sup{x : I(x) <= u_I}, each +inf when
/// the level is never exceeded.
Thresholds thresholds(const Indemnity& I, const PremiumParams& p,
                      const LossModel& m);
Thresholds thresholds(const Indemnity& I, const SchemeThresholds& t);

/// Whether I has the shape of the given family for its own ceded mean, to an
/// absolute tolerance on the layer widths. StopLoss contracts conform to I1
/// and I2 (degenerate layouts).
bool conforms_to(const Indemnity& I, Family family, const PremiumParams& p,
                 const LossModel& m, double tol = 1e-8);

}  // namespace repremia

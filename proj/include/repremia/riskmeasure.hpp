#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "repremia/dist.hpp"
#include "repremia/piecewise.hpp"
#include "repremia/scheme.hpp"

namespace repremia {

enum class DistortionKind { VaR, TVaR, Power, Custom };

/// Distortion function g on [0,1] with g(0) = 0, g(1) = 1, nondecreasing.
///
/// TVaR(alpha): g(p) = min(p / alpha, 1). VaR(alpha): g(p) = 1{p > alpha}.
/// Power(beta): g(p) = p^beta. Custom: linear interpolation of a table of
/// (p, g) points running from (0,0) to (1,1).
class Distortion {
 public:
  static Distortion tvar(double alpha);
  static Distortion var(double alpha);
  static Distortion power(double beta);
  static Distortion custom(std::vector<std::pair<double, double>> table);

  DistortionKind kind() const { return kind_; }
  /// alpha for VaR/TVaR, beta for Power, NaN for Custom.
  double level() const { return level_; }
  bool concave() const { return concave_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

  /// Same kind at a different level; not defined for Custom.
  Distortion with_level(double level) const;

  double operator()(double p) const;

  std::string describe() const;

  friend bool operator==(const Distortion&, const Distortion&) = default;

 private:
  Distortion() = default;

  DistortionKind kind_ = DistortionKind::TVaR;
  double level_ = 1.0;
  bool concave_ = true;
  std::vector<std::pair<double, double>> table_;
};

double g_eval(const Distortion& d, double p);

/// Integral of g(S(x)) over [l, u]; u may be +inf and the result may be +inf
/// (power distortions of heavy tails).
double distorted_layer(const Distortion& d, const LossModel& m, double l,
                       double u);

/// rho^g(t(X)) for a nondecreasing piecewise-linear t:
/// t(0) + sum of slope_k times the distorted layer of segment k.
double rho_monotone_transform(const Distortion& d, const LossModel& m,
                              const PiecewiseLinear& t);

/// rho^g(X).
double rho_loss(const Distortion& d, const LossModel& m);

/// rho^g(T_I(X)) for I in the I1 family with ceded mean a and layout
/// (d1, d1 + d_I, d2); an empty d2 means no upper layer.
double rho_T_I1_closed(const Distortion& d, const LossModel& m,
                       const PremiumParams& p, double a, double d1,
                       std::optional<double> d2);

/// rho^g(T_I(X)) for I in the I2 family. Requires a concave g.
double rho_T_I2_closed(const Distortion& d, const LossModel& m,
                       const PremiumParams& p, double a, double d1,
                       std::optional<double> d2);

}  // namespace repremia

#include "repremia/scheme.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "repremia/errors.hpp"

namespace repremia {

PremiumParams PremiumParams::make(double delta, double theta0, double theta1,
                                  double theta2) {
  constexpr double kSlack = 1e-12;
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("premium: delta must lie in [0,1]");
  }
  for (double t : {theta0, theta1, theta2}) {
    if (!std::isfinite(t) || t < 0.0) {
      throw DomainError("premium: loadings must be finite and >= 0");
    }
  }
  if (!(theta0 < theta2)) throw DomainError("premium: need theta0 < theta2");
  if (theta1 > theta0 + kSlack) throw DomainError("premium: need theta1 <= theta0");
  if (theta1 < theta0 - delta - kSlack) {
    throw DomainError("premium: need theta1 >= theta0 - delta");
  }
  if (delta == 0.0 && theta1 != theta0) {
    throw DomainError("premium: delta = 0 requires theta1 = theta0");
  }
  return PremiumParams(delta, theta0, std::min(theta1, theta0), theta2);
}

double floor_width_factor(const PremiumParams& p) {
  if (p.constant_premium()) {
    throw DomainError("floor width undefined for the constant premium");
  }
  const double f = (p.theta1() - p.theta0() + p.delta()) / p.delta();
  // theta1 = theta0 - delta computed in floating point leaves dust here
  return f < 1e-12 ? 0.0 : f;
}

double cap_width_factor(const PremiumParams& p) {
  if (p.constant_premium()) {
    throw DomainError("cap width undefined for the constant premium");
  }
  return (p.theta2() - p.theta0() + p.delta()) / p.delta();
}

SchemeThresholds scheme_thresholds(const PremiumParams& p, double a) {
  if (std::isnan(a) || a < 0.0) throw DomainError("ceded mean must be >= 0");
  SchemeThresholds t;
  t.a = a;
  t.pi0 = (1.0 + p.theta0()) * a;
  t.pi1 = (1.0 + p.theta1()) * a;
  t.pi2 = (1.0 + p.theta2()) * a;
  t.constant = p.constant_premium();
  if (t.constant) {
    t.d_I = t.u_I = std::numeric_limits<double>::infinity();
  } else {
    t.d_I = floor_width_factor(p) * a;
    t.u_I = cap_width_factor(p) * a;
  }
  return t;
}

}  // namespace repremia

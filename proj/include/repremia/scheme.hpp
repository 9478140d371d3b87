#pragma once

namespace repremia {

/// Parameters of the reward-and-penalty premium scheme.
///
/// delta is the slope of the realized premium in the realized ceded loss;
/// theta1 <= theta0 < theta2 are the floor, benchmark and cap loadings.
/// Construction enforces max(theta0 - delta, 0) <= theta1 <= theta0 < theta2
/// and allows delta = 0 only together with theta1 = theta0 (the constant,
/// expected-value premium).
class PremiumParams {
 public:
  static PremiumParams make(double delta, double theta0, double theta1,
                            double theta2);

  double delta() const { return delta_; }
  double theta0() const { return theta0_; }
  double theta1() const { return theta1_; }
  double theta2() const { return theta2_; }

  bool constant_premium() const { return delta_ == 0.0; }

  friend bool operator==(const PremiumParams&, const PremiumParams&) = default;

 private:
  PremiumParams(double delta, double theta0, double theta1, double theta2)
      : delta_(delta), theta0_(theta0), theta1_(theta1), theta2_(theta2) {}

  double delta_;
  double theta0_;
  double theta1_;
  double theta2_;
};

/// Premium levels implied by a ceded mean a. d_I and u_I are the realized
/// ceded amounts where the premium leaves the floor and reaches the cap; both
/// are +inf under the constant premium.
struct SchemeThresholds {
  double a = 0.0;
  double d_I = 0.0;
  double u_I = 0.0;
  double pi0 = 0.0;
  double pi1 = 0.0;
  double pi2 = 0.0;
  bool constant = false;
};

SchemeThresholds scheme_thresholds(const PremiumParams& p, double a);

/// (theta1 - theta0 + delta) / delta, the ratio d_I / a. Throws for delta = 0.
double floor_width_factor(const PremiumParams& p);
/// (theta2 - theta0 + delta) / delta, the ratio u_I / a. Throws for delta = 0.
double cap_width_factor(const PremiumParams& p);

}  // namespace repremia

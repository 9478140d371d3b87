#include "repremia/indemnity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "repremia/errors.hpp"
#include "repremia/numeric.hpp"

namespace repremia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_feasible(const PiecewiseLinear& f) {
  if (f.value0() != 0.0) throw DomainError("indemnity: I(0) must be 0");
  for (double s : f.slopes()) {
    if (s < 0.0 || s > 1.0) {
      throw DomainError("indemnity: slopes must lie in [0,1]");
    }
  }
}

double opt_or_inf(const std::optional<double>& v) { return v ? *v : kInf; }

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::StopLoss: return "StopLoss";
    case Family::I1: return "I1";
    case Family::I2: return "I2";
    case Family::S3: return "S3";
    case Family::General: return "General";
  }
  return "General";
}

Family family_from_string(std::string_view s) {
  if (s == "StopLoss") return Family::StopLoss;
  if (s == "I1") return Family::I1;
  if (s == "I2") return Family::I2;
  if (s == "S3") return Family::S3;
  if (s == "General") return Family::General;
  throw DomainError("unknown indemnity family '" + std::string(s) + "'");
}

Indemnity::Indemnity(Family family, Layout layout, PiecewiseLinear f)
    : family_(family), layout_(std::move(layout)), f_(std::move(f)) {
  check_feasible(f_);
}

Indemnity Indemnity::zero() { return {Family::General, std::monostate{}, {}}; }

Indemnity Indemnity::full() { return stop_loss(0.0); }

Indemnity Indemnity::stop_loss(double d) {
  if (std::isnan(d) || d < 0.0) throw DomainError("stop-loss: deductible must be >= 0");
  if (std::isinf(d)) return zero();
  return {Family::StopLoss, StopLossLayout{d},
          PiecewiseLinear::from_ramps(0.0, {{d, 1.0}})};
}

Indemnity Indemnity::two_layer(Family family, TwoLayerLayout l) {
  if (family != Family::I1 && family != Family::I2) {
    throw DomainError("two_layer: family must be I1 or I2");
  }
  const double d2 = opt_or_inf(l.d2);
  if (!(l.d1 >= 0.0) || !(l.width >= 0.0) || std::isinf(l.d1) ||
      std::isinf(l.width)) {
    throw DomainError("two_layer: need finite d1 >= 0 and width >= 0");
  }
  if (d2 < l.d1 + l.width) {
    throw InfeasibleError("two_layer: violated d2 >= d1 + width");
  }
  auto f = PiecewiseLinear::from_ramps(
      0.0, {{l.d1, 1.0}, {l.d1 + l.width, -1.0}, {d2, 1.0}});
  return {family, l, std::move(f)};
}

Indemnity Indemnity::three_layer(ThreeLayerLayout l) {
  const double e = opt_or_inf(l.e);
  if (!(0.0 <= l.a && l.a <= l.b && l.b <= l.c && l.c <= l.d && l.d <= e) ||
      std::isinf(l.d)) {
    throw InfeasibleError("three_layer: violated 0 <= a <= b <= c <= d <= e");
  }
  auto f = PiecewiseLinear::from_ramps(
      0.0, {{l.a, 1.0}, {l.b, -1.0}, {l.c, 1.0}, {l.d, -1.0}, {e, 1.0}});
  return {Family::S3, l, std::move(f)};
}

Indemnity Indemnity::general(PiecewiseLinear f) {
  return {Family::General, std::monostate{}, f.simplified()};
}

Indemnity Indemnity::general(const std::vector<std::pair<double, double>>& breakpoints) {
  if (breakpoints.empty()) return zero();
  std::vector<double> knots;
  std::vector<double> slopes;
  for (const auto& [x, s] : breakpoints) {
    knots.push_back(x);
    slopes.push_back(s);
  }
  return general(PiecewiseLinear(0.0, std::move(knots), std::move(slopes)));
}

bool Indemnity::is_zero() const {
  for (double s : f_.slopes()) {
    if (s != 0.0) return false;
  }
  return true;
}

double ceded_mean(const Indemnity& I, const LossModel& m) {
  return I.function().expectation(m);
}

namespace {

struct Completion {
  double d_tilde;
  double width;
};

Completion prepare(const LossModel& m, const PremiumParams& p, double a,
                   double& d1, double width_factor, const char* who) {
  if (!(a > 0.0) || a > m.mean() * (1.0 + 1e-12)) {
    throw DomainError(std::string(who) + ": need 0 < a <= mean");
  }
  if (p.constant_premium()) {
    throw DomainError(std::string(who) +
                      ": layer widths are undefined for the constant premium");
  }
  const double d_tilde = m.invert_stop_loss(std::min(a, m.mean()));
  if (std::isnan(d1) || d1 < 0.0) {
    throw DomainError(std::string(who) + ": d1 must be >= 0");
  }
  if (d1 > d_tilde) {
    if (d1 > d_tilde + 1e-9 * std::max(1.0, d_tilde)) {
      throw InfeasibleError(std::string(who) +
                            ": violated d2 >= d1 + width (d1 exceeds the "
                            "stop-loss deductible for this mean)");
    }
    d1 = d_tilde;
  }
  return {d_tilde, width_factor * a};
}

Indemnity complete(Family family, const LossModel& m, double a, double d1,
                   double width) {
  const double first = m.layer_mean(d1, d1 + width);
  const double rest = a - first;
  if (rest < -1e-12 * a) {
    throw InfeasibleError(std::string(family == Family::I1 ? "complete_I1" : "complete_I2") +
                          ": violated mean constraint (first layer mean exceeds a)");
  }
  std::optional<double> d2;
  if (rest > 1e-14 * a) {
    d2 = std::max(m.invert_stop_loss(std::min(rest, m.mean())), d1 + width);
  }
  return Indemnity::two_layer(family, {d1, width, d2});
}

}  // namespace

Indemnity complete_I1(const LossModel& m, const PremiumParams& p, double a,
                      double d1) {
  const auto c = prepare(m, p, a, d1, p.constant_premium() ? 0.0 : floor_width_factor(p),
                         "complete_I1");
  return complete(Family::I1, m, a, d1, c.width);
}

Indemnity complete_I2(const LossModel& m, const PremiumParams& p, double a,
                      double d1) {
  const auto c = prepare(m, p, a, d1, p.constant_premium() ? 0.0 : cap_width_factor(p),
                         "complete_I2");
  return complete(Family::I2, m, a, d1, c.width);
}

double i2_lower_bound(const LossModel& m, const PremiumParams& p, double a) {
  const double u = cap_width_factor(p) * a;
  const double d_tilde = m.invert_stop_loss(std::min(a, m.mean()));
  if (m.layer_mean(0.0, u) <= a) return 0.0;
  // layer_mean(d1, d1 + u) decreases in d1 and is <= a at d~
  return numeric::bisect_first_nonnegative(
      [&](double d1) { return a - m.layer_mean(d1, d1 + u); }, 0.0, d_tilde);
}

Thresholds thresholds(const Indemnity& I, const SchemeThresholds& t) {
  return {I.function().sup_level(t.d_I), I.function().sup_level(t.u_I)};
}

Thresholds thresholds(const Indemnity& I, const PremiumParams& p,
                      const LossModel& m) {
  return thresholds(I, scheme_thresholds(p, ceded_mean(I, m)));
}

bool conforms_to(const Indemnity& I, Family family, const PremiumParams& p,
                 const LossModel& m, double tol) {
  if (I.family() == Family::StopLoss) {
    return family != Family::General;
  }
  if (family == Family::General) return true;
  if (I.family() != family || p.constant_premium()) return false;
  const auto t = scheme_thresholds(p, ceded_mean(I, m));
  if (const auto* l = std::get_if<TwoLayerLayout>(&I.layout())) {
    const double want = family == Family::I1 ? t.d_I : t.u_I;
    return std::abs(l->width - want) <= tol * std::max(1.0, want);
  }
  if (const auto* l = std::get_if<ThreeLayerLayout>(&I.layout())) {
    const double scale = std::max(1.0, t.u_I);
    return std::abs((l->b - l->a) - t.d_I) <= tol * scale &&
           std::abs((l->d - l->c) - (t.u_I - t.d_I)) <= tol * scale;
  }
  return false;
}

}  // namespace repremia

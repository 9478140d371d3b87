#include "repremia/premium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "repremia/errors.hpp"

namespace repremia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool no_trade(const SchemeThresholds& t) { return t.a == 0.0; }

double premium_slope_at(const PremiumParams& p, const SchemeThresholds& t,
                        double y) {
  if (t.constant || no_trade(t)) return 0.0;
  return (y > t.d_I && y < t.u_I) ? p.delta() : 0.0;
}

}  // namespace

std::string_view to_string(PremiumBranch b) {
  switch (b) {
    case PremiumBranch::Floor: return "floor";
    case PremiumBranch::Band: return "band";
    case PremiumBranch::Cap: return "cap";
    case PremiumBranch::Constant: return "constant";
  }
  return "constant";
}

double realized_premium(const PremiumParams& p, const SchemeThresholds& t,
                        double y) {
  if (std::isnan(y) || y < 0.0) throw DomainError("realized_premium: y must be >= 0");
  if (no_trade(t)) return 0.0;
  if (t.constant) return t.pi0;
  const double band = t.pi0 + p.delta() * (y - t.a);
  return std::min(std::max(band, t.pi1), t.pi2);
}

PremiumBranch premium_branch(const PremiumParams& p, const SchemeThresholds& t,
                             double y) {
  (void)p;
  if (t.constant) return PremiumBranch::Constant;
  if (y <= t.d_I) return PremiumBranch::Floor;
  if (y < t.u_I) return PremiumBranch::Band;
  return PremiumBranch::Cap;
}

SchemeThresholds bind_thresholds(const PremiumParams& p, const Indemnity& I,
                                 const LossModel& m) {
  return scheme_thresholds(p, ceded_mean(I, m));
}

double insurer_total(const PremiumParams& p, const SchemeThresholds& t,
                     const Indemnity& I, double x) {
  const double y = I(x);
  return x - y + realized_premium(p, t, y);
}

double reinsurer_net(const PremiumParams& p, const SchemeThresholds& t,
                     const Indemnity& I, double x) {
  const double y = I(x);
  return y - realized_premium(p, t, y);
}

PiecewiseLinear premium_transform(const PremiumParams& p,
                                  const SchemeThresholds& t, const Indemnity& I) {
  if (no_trade(t)) return PiecewiseLinear::constant(0.0);
  if (t.constant) return PiecewiseLinear::constant(t.pi0);
  const auto& f = I.function();
  if (!f.nondecreasing()) {
    throw DomainError("premium_transform: indemnity must be nondecreasing");
  }
  // Knots of the composition: those of I plus the crossings of d_I and u_I.
  std::vector<double> knots = f.knots();
  for (double level : {t.d_I, t.u_I}) {
    const double x = f.sup_level(level);
    if (std::isfinite(x) && x > 0.0) knots.push_back(x);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<double> slopes(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double s = f.slope_at(knots[i]);
    if (s == 0.0) continue;
    // midpoint keeps rounding at the crossings out of the branch test
    const double mid = i + 1 < knots.size() ? 0.5 * (knots[i] + knots[i + 1])
                                            : knots[i] + 1.0;
    slopes[i] = s * premium_slope_at(p, t, f(mid));
  }
  return PiecewiseLinear(realized_premium(p, t, 0.0), std::move(knots),
                         std::move(slopes))
      .simplified();
}

PiecewiseLinear insurer_position(const PremiumParams& p,
                                 const SchemeThresholds& t, const Indemnity& I) {
  const auto identity = PiecewiseLinear::from_ramps(0.0, {{0.0, 1.0}});
  return identity - I.function() + premium_transform(p, t, I);
}

PiecewiseLinear reinsurer_position(const PremiumParams& p,
                                   const SchemeThresholds& t, const Indemnity& I) {
  return I.function() - premium_transform(p, t, I);
}

double premium_survival(const PremiumParams& p, const SchemeThresholds& t,
                        const Indemnity& I, const LossModel& m, double z) {
  const Family fam = I.family();
  if (fam != Family::StopLoss && fam != Family::I1 && fam != Family::I2) {
    throw UnsupportedError(
        "premium_survival: closed form covers StopLoss, I1 and I2 only; use the "
        "Monte Carlo oracle for other contracts");
  }
  if (no_trade(t)) return z < 0.0 ? 1.0 : 0.0;
  if (t.constant) return z < t.pi0 ? 1.0 : 0.0;
  if (z < t.pi1) return 1.0;
  if (z >= t.pi2) return 0.0;
  // Start of the slope-delta stretch in loss space.
  double start = kInf;
  if (const auto* sl = std::get_if<StopLossLayout>(&I.layout())) {
    start = sl->d + t.d_I;
  } else if (const auto* two = std::get_if<TwoLayerLayout>(&I.layout())) {
    if (fam == Family::I1) {
      start = two->d2 ? *two->d2 : kInf;
    } else {
      start = two->d1 + t.d_I;
    }
  }
  if (std::isinf(start)) return 0.0;
  return m.survival(start + (z - t.pi1) / p.delta());
}

double expected_premium(const PremiumParams& p, const SchemeThresholds& t,
                        const Indemnity& I, const LossModel& m) {
  return premium_transform(p, t, I).expectation(m);
}

}  // namespace repremia

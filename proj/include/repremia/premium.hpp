#pragma once

#include <string_view>

#include "repremia/dist.hpp"
#include "repremia/indemnity.hpp"
#include "repremia/piecewise.hpp"
#include "repremia/scheme.hpp"

namespace repremia {

enum class PremiumBranch { Floor, Band, Cap, Constant };

std::string_view to_string(PremiumBranch b);

/// Premium charged when the realized ceded amount is y.
double realized_premium(const PremiumParams& p, const SchemeThresholds& t,
                        double y);
PremiumBranch premium_branch(const PremiumParams& p, const SchemeThresholds& t,
                             double y);

/// Thresholds bound to the ceded mean of I under m.
SchemeThresholds bind_thresholds(const PremiumParams& p, const Indemnity& I,
                                 const LossModel& m);

/// T_I(x) = x - I(x) + Pi_I(x), the insurer's total cost.
double insurer_total(const PremiumParams& p, const SchemeThresholds& t,
                     const Indemnity& I, double x);
/// N_I(x) = I(x) - Pi_I(x), the reinsurer's net payout.
double reinsurer_net(const PremiumParams& p, const SchemeThresholds& t,
                     const Indemnity& I, double x);

/// x -> Pi(I(x)) as a piecewise-linear function of the ground-up loss.
PiecewiseLinear premium_transform(const PremiumParams& p,
                                  const SchemeThresholds& t, const Indemnity& I);
PiecewiseLinear insurer_position(const PremiumParams& p,
                                 const SchemeThresholds& t, const Indemnity& I);
PiecewiseLinear reinsurer_position(const PremiumParams& p,
                                   const SchemeThresholds& t, const Indemnity& I);

/// P(Pi_I(X) > z) for stop-loss and two-layer contracts. Throws
/// UnsupportedError for other families.
double premium_survival(const PremiumParams& p, const SchemeThresholds& t,
                        const Indemnity& I, const LossModel& m, double z);

/// E[Pi_I(X)], exact from layer integrals.
double expected_premium(const PremiumParams& p, const SchemeThresholds& t,
                        const Indemnity& I, const LossModel& m);

}  // namespace repremia

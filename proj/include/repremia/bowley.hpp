#pragma once

#include <optional>
#include <string>
#include <vector>

#include "repremia/dist.hpp"
#include "repremia/indemnity.hpp"
#include "repremia/insurer_solver.hpp"
#include "repremia/riskmeasure.hpp"
#include "repremia/scheme.hpp"

namespace repremia {

/// theta1 = max(theta0 - delta, theta1_bar).
double theta1_rule(double delta, double theta0, double theta1_bar);

/// Scheme parameters at delta under the theta1 rule.
PremiumParams bowley_params(double delta, double theta0, double theta1_bar,
                            double theta2);

/// rho^{g2}(I(X) - Pi_I(X)).
double reinsurer_value(const LossModel& m, const PremiumParams& p,
                       const Distortion& g2, const Indemnity& I);

/// start, start + step, ..., up to end (inclusive within rounding).
std::vector<double> delta_grid(double start, double end, double step);

struct BowleyConfig {
  LossModel loss = LossModel::exponential(1.0);
  double theta0 = 1.0;
  double theta1_bar = 0.5;
  double theta2 = 2.0;
  Distortion insurer = Distortion::tvar(0.1);
  Distortion reinsurer = Distortion::tvar(0.05);
  std::vector<double> deltas = delta_grid(0.0, 1.0, 0.001);
  /// Tolerance on reinsurer values defining the optimal set; negative means
  /// 1e-6 * mean.
  double eps_val = -1.0;
  SolverSettings solver;
  unsigned threads = 1;
};

/// Insurer best response at one delta.
struct InsurerRow {
  double delta;
  double theta1;
  SolveReport report;
};

struct BowleyRow {
  double delta;
  double theta1;
  Indemnity contract = Indemnity::zero();
  InnerBranch branch;
  double a;
  double d1;
  std::optional<double> d2;
  double d_I;
  double insurer_value;
  double reinsurer_value;
  std::vector<std::string> warnings;
};

struct BowleyReport {
  std::vector<BowleyRow> rows;
  std::size_t star_index = 0;
  double delta_star = 0.0;
  double delta_min = 0.0;  // optimal set endpoints
  double delta_max = 0.0;
  double eps_val = 0.0;
  Indemnity contract_star = Indemnity::zero();
  /// Rows outside the chosen one whose reinsurer value is within eps_val.
  std::size_t optimal_count = 0;
};

/// Solves the insurer problem at every delta of the config. Rows are
/// independent and evaluated on cfg.threads workers; order follows deltas.
std::vector<InsurerRow> insurer_rows(const BowleyConfig& cfg);

/// Reinsurer evaluation of precomputed insurer rows under g2.
BowleyReport evaluate_rows(const BowleyConfig& cfg,
                           const std::vector<InsurerRow>& rows,
                           const Distortion& g2);

BowleyReport sweep(const BowleyConfig& cfg);

struct BetaPoint {
  double beta;
  double delta_star;
  double delta_min;
  double delta_max;
  double reinsurer_value;
};

/// delta* and the optimal set for each reinsurer level. The insurer rows do
/// not depend on beta and are solved once.
std::vector<BetaPoint> beta_curve(const BowleyConfig& cfg,
                                  const std::vector<double>& betas);

}  // namespace repremia

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repremia/dist.hpp"
#include "repremia/indemnity.hpp"
#include "repremia/riskmeasure.hpp"
#include "repremia/scheme.hpp"

namespace repremia {

enum class InnerBranch { TwoLayer, StopLoss, NoTrade };

std::string_view to_string(InnerBranch b);

/// Best I1 contract at a fixed ceded mean a.
struct InnerSolution {
  double a = 0.0;
  double d1 = 0.0;
  std::optional<double> d2;  // empty: no upper layer
  double value = 0.0;
  InnerBranch branch = InnerBranch::NoTrade;
  double h_residual = 0.0;  // H at the returned d1 (bisection path only)
  bool ratio_verified = false;
  std::string method;  // "bisection", "scan", "closed"
  std::vector<std::string> warnings;
  Indemnity contract = Indemnity::zero();
};

struct SolverSettings {
  int outer_grid = 200;
  int inner_grid = 200;
  /// Golden-section stopping width relative to the search scale.
  double refine_rel = 1e-9;
  unsigned threads = 1;
};

struct TracePoint {
  double a;
  double d1;
  std::optional<double> d2;
  double value;
  InnerBranch branch;
};

struct SolveReport {
  Indemnity contract = Indemnity::zero();
  double a_star = 0.0;
  double value = 0.0;
  InnerSolution inner;
  std::vector<TracePoint> trace;
  SolverSettings settings;
  std::vector<std::string> warnings;
};

/// H(d1) from the first-order analysis of the TVaR inner problem, with d2
/// obtained from the mean constraint. Beyond the stop-loss deductible (or
/// when no upper layer remains) the survival ratio at d2 is its tail limit.
double H(const LossModel& m, const PremiumParams& p, double alpha, double a,
         double d1);

/// Whether S(d + w) / S(d) is nondecreasing on a 200-point quantile grid.
bool ratio_condition_holds(const LossModel& m, double w);

struct HRoot {
  double d1;
  double residual;
  bool bracketed;
};

/// Smallest root of H on [max(0, v_alpha - d_I), v_alpha], v_alpha the
/// (1 - alpha)-quantile. Not capped at the stop-loss deductible.
HRoot h_root(const LossModel& m, const PremiumParams& p, double alpha, double a);

InnerSolution solve_inner_tvar(const LossModel& m, const PremiumParams& p,
                               double alpha, double a);
InnerSolution solve_inner_scan(const LossModel& m, const PremiumParams& p,
                               const Distortion& g, double a, int grid = 200);
/// Dispatches to the bisection path for TVaR and to the scan otherwise.
InnerSolution solve_inner(const LossModel& m, const PremiumParams& p,
                          const Distortion& g, double a,
                          const SolverSettings& s = {});

SolveReport solve_insurer(const LossModel& m, const PremiumParams& p,
                          const Distortion& g, const SolverSettings& s = {});

struct DominanceResult {
  bool dominated;
  double margin;        // min over I2 minus min over I1
  bool i2_nonincreasing;
  double i1_min;
  double i2_min;
};

/// Scans both two-layer families at the same ceded mean.
DominanceResult verify_I2_dominated(const LossModel& m, const PremiumParams& p,
                                    const Distortion& g, double a, int grid = 200);

}  // namespace repremia

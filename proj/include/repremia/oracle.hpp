#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repremia/dist.hpp"
#include "repremia/indemnity.hpp"
#include "repremia/piecewise.hpp"
#include "repremia/riskmeasure.hpp"
#include "repremia/scheme.hpp"

namespace repremia {

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string estimator;  // "tvar_tail_mean" or "l_statistic"
};

/// Distortion estimate from a sample: TVaR as the mean of the top
/// ceil(alpha n) values, otherwise the L-statistic with weights
/// g(k/n) - g((k-1)/n) on the values in decreasing order. The standard error
/// comes from 20 contiguous batches, so values must be in draw order (i.i.d.),
/// not sorted.
MCEstimate mc_estimate(const Distortion& g, const std::vector<double>& values);

/// Monte Carlo estimate of rho^g(position(X)) from n draws of X.
MCEstimate mc_rho(const Distortion& g, const PiecewiseLinear& position,
                  const LossModel& m, std::size_t n, std::uint64_t seed);

struct ConvexOrderResult {
  bool holds = false;
  double mean_gap = 0.0;       // |E[Z1] - E[Z2]|
  double max_violation = 0.0;  // max over t of E[(Z1-t)+] - E[(Z2-t)+]
  double t_at_max = 0.0;
  std::size_t points = 0;
};

/// Checks Z1 <=cx Z2 for Z_i = z_i(X) through exact stop-loss transforms on a
/// grid of retentions: knot images, a uniform grid between the extreme
/// finite images and tail-quantile images. Tolerance 1e-7 * E[X].
ConvexOrderResult convex_order_check(const PiecewiseLinear& z1,
                                     const PiecewiseLinear& z2,
                                     const LossModel& m, std::size_t t_grid = 200);

struct Improved {
  Indemnity contract = Indemnity::zero();
  /// T of the result against T of the input.
  ConvexOrderResult certificate;
  std::vector<std::string> notes;
};

/// Three-layer contract with the same ceded mean whose insurer total is
/// smaller in convex order (the f1, f2, f3 steps).
Improved improve_to_S3(const Indemnity& I, const LossModel& m,
                       const PremiumParams& p);

/// Two-layer (I1 or I2) contract from a three-layer one, matched in both the
/// ceded mean and the mean insurer total.
Improved improve_to_two_layer(const Indemnity& I3, const LossModel& m,
                              const PremiumParams& p);

struct BruteForceResult {
  Indemnity contract = Indemnity::zero();
  Family family = Family::General;
  double a = 0.0;
  double d1 = 0.0;
  double value = 0.0;
  std::size_t evaluated = 0;
};

struct BruteForceOptions {
  int a_grid = 200;
  int d1_grid = 200;
  bool include_I2 = false;
  /// Coarse per-parameter grid for three-layer layouts; 0 disables them.
  int s3_grid = 0;
};

/// Exhaustive grid search over layered contracts. Ceded means run over
/// mean * k / a_grid (k = 0..a_grid) and d1 over [0, d~] in d1_grid steps.
BruteForceResult brute_force_insurer(const LossModel& m, const PremiumParams& p,
                                     const Distortion& g,
                                     const BruteForceOptions& opt = {});

}  // namespace repremia

#include <random>

namespace repremia {

/// Seed of case `index` derived from a master seed (splitmix64), so cases
/// stay reproducible whatever order they run in.
std::uint64_t case_seed(std::uint64_t master, std::uint64_t index);

/// Exponential or Pareto with parameters log-uniform on [0.5, 4]; the Pareto
/// shape is drawn from [1.5, 4] to keep the mean finite.
LossModel random_loss(std::mt19937_64& rng);

/// delta in [0.05, 1], theta0 in [0.1, 1.5], theta1 uniform on its admissible
/// range and theta2 - theta0 in [0.1, 3].
PremiumParams random_params(std::mt19937_64& rng);

/// Feasible indemnity with 1 to max_breakpoints kinks placed below the 0.99
/// quantile; slopes from {0, 1} or, with half_slopes, {0, 1/2, 1}. The
/// ceded mean is positive.
Indemnity random_indemnity(std::mt19937_64& rng, const LossModel& m,
                           int max_breakpoints = 8, bool half_slopes = false);

}  // namespace repremia

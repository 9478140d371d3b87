#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace repremia {

enum class LossKind { Pareto, Exponential, Tabulated };

/// Distribution of a nonnegative ground-up loss X with finite mean.
///
/// Parametric kinds are the type-II Pareto, S(x) = (eta / (x + eta))^zeta with
/// zeta > 1, and the Exponential, S(x) = exp(-x / mu). A tabulated model
/// interpolates S linearly between strictly decreasing grid points; beyond
/// the last point the tail decays exponentially at the rate implied by the
/// final two points, or the support ends there when the last survival value
/// is exactly 0.
///
/// Immutable after construction; every member is a pure function.
class LossModel {
 public:
  static LossModel pareto(double eta, double zeta);
  static LossModel exponential(double mu);
  static LossModel tabulated(std::vector<std::pair<double, double>> points);

  LossKind kind() const { return kind_; }

  /// S(x) = P(X > x). Throws DomainError for x < 0.
  double survival(double x) const;
  double cdf(double x) const { return 1.0 - survival(x); }

  /// Left-continuous inverse inf{x : F(x) >= p}, p in (0,1).
  double quantile(double p) const;

  /// Integral of S over [l, u]; u may be +infinity.
  double layer_mean(double l, double u) const;

  /// E[(X - d)_+].
  double stop_loss(double d) const;

  /// Deductible d with E[(X - d)_+] = a, for 0 < a <= mean().
  double invert_stop_loss(double a) const;

  double mean() const { return mean_; }

  /// +infinity unless a tabulated model ends with S = 0.
  double ess_sup() const;

  /// lim_{d -> inf} S(d + shift) / S(d). Used where a ratio is evaluated at
  /// an infinite deductible.
  double tail_ratio(double shift) const;

  /// Inverse-transform i.i.d. draws, deterministic for a fixed seed.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

  double eta() const { return eta_; }
  double zeta() const { return zeta_; }
  double mu() const { return mu_; }
  const std::vector<std::pair<double, double>>& points() const {
    return points_;
  }

  friend bool operator==(const LossModel&, const LossModel&) = default;

 private:
  LossModel() = default;

  double tab_survival(double x) const;
  double tab_layer(double l, double u) const;
  double tab_quantile(double p) const;

  LossKind kind_ = LossKind::Exponential;
  double eta_ = 0.0;
  double zeta_ = 0.0;
  double mu_ = 0.0;
  std::vector<std::pair<double, double>> points_;
  double tail_rate_ = 0.0;  // 0 when the tabulated support is bounded
  double mean_ = 0.0;
};

}  // namespace repremia

#include "repremia/insurer_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "repremia/errors.hpp"
#include "repremia/numeric.hpp"

namespace repremia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double stop_loss_deductible(const LossModel& m, double a) {
  return m.invert_stop_loss(std::min(a, m.mean()));
}

void check_mean(const LossModel& m, double a, const char* who) {
  if (!(a > 0.0) || a > m.mean() * (1.0 + 1e-12)) {
    throw DomainError(std::string(who) + ": need 0 < a <= mean");
  }
}

// rho(T) of the stop-loss contract with deductible d and mean a.
double stop_loss_value(const Distortion& g, const LossModel& m,
                       const PremiumParams& p, double a, double d) {
  if (p.constant_premium()) {
    return distorted_layer(g, m, 0.0, d) + (1.0 + p.theta0()) * a;
  }
  return rho_T_I1_closed(g, m, p, a, d, d + floor_width_factor(p) * a);
}

InnerSolution stop_loss_solution(const Distortion& g, const LossModel& m,
                                 const PremiumParams& p, double a,
                                 std::string method) {
  InnerSolution s;
  s.a = a;
  s.d1 = stop_loss_deductible(m, a);
  s.d2 = p.constant_premium() ? s.d1 : s.d1 + floor_width_factor(p) * a;
  s.branch = InnerBranch::StopLoss;
  s.method = std::move(method);
  s.contract = Indemnity::stop_loss(s.d1);
  s.value = stop_loss_value(g, m, p, a, s.d1);
  return s;
}

// Inner problems with a forced answer: full cession, the constant premium and
// a zero-width floor layer (I1 then reduces to stop-loss).
std::optional<InnerSolution> trivial_inner(const Distortion& g,
                                           const LossModel& m,
                                           const PremiumParams& p, double a) {
  if (a >= m.mean() * (1.0 - 1e-12)) return stop_loss_solution(g, m, p, a, "closed");
  if (p.constant_premium()) return stop_loss_solution(g, m, p, a, "closed");
  if (floor_width_factor(p) == 0.0) return stop_loss_solution(g, m, p, a, "closed");
  return std::nullopt;
}

InnerSolution from_d1(const Distortion& g, const LossModel& m,
                      const PremiumParams& p, double a, double d1,
                      std::string method) {
  const double dt = stop_loss_deductible(m, a);
  if (d1 >= dt * (1.0 - 1e-12)) return stop_loss_solution(g, m, p, a, std::move(method));
  InnerSolution s;
  s.a = a;
  s.contract = complete_I1(m, p, a, d1);
  const auto& l = std::get<TwoLayerLayout>(s.contract.layout());
  s.d1 = l.d1;
  s.d2 = l.d2;
  s.value = rho_T_I1_closed(g, m, p, a, l.d1, l.d2);
  s.branch = InnerBranch::TwoLayer;
  s.method = std::move(method);
  return s;
}

double I1_value(const Distortion& g, const LossModel& m, const PremiumParams& p,
                double a, double d1) {
  const auto I = complete_I1(m, p, a, d1);
  const auto& l = std::get<TwoLayerLayout>(I.layout());
  return rho_T_I1_closed(g, m, p, a, l.d1, l.d2);
}

}  // namespace

std::string_view to_string(InnerBranch b) {
  switch (b) {
    case InnerBranch::TwoLayer: return "two_layer";
    case InnerBranch::StopLoss: return "stop_loss";
    case InnerBranch::NoTrade: return "no_trade";
  }
  return "no_trade";
}

double H(const LossModel& m, const PremiumParams& p, double alpha, double a,
         double d1) {
  check_mean(m, a, "H");
  if (std::isnan(d1) || d1 < 0.0) throw DomainError("H: d1 must be >= 0");
  const auto t = scheme_thresholds(p, a);
  const double s1 = m.survival(d1);
  const double s2 = m.survival(d1 + t.d_I);
  if (!(s1 - s2 > 0.0)) {
    throw SingularityError("H: S(d1) - S(d1 + d_I) vanishes");
  }
  const double w = t.u_I - t.d_I;
  double ratio = m.tail_ratio(w);
  if (d1 <= stop_loss_deductible(m, a)) {
    const double rest = a - m.layer_mean(d1, d1 + t.d_I);
    if (rest > 1e-14 * a) {
      const double d2 =
          std::max(m.invert_stop_loss(std::min(rest, m.mean())), d1 + t.d_I);
      const double sd2 = m.survival(d2);
      if (sd2 > 0.0) ratio = m.survival(d2 + w) / sd2;
    }
  }
  return (alpha - s2) / (s1 - s2) - p.delta() * ratio + p.delta() - 1.0;
}

bool ratio_condition_holds(const LossModel& m, double w) {
  if (w <= 0.0) return true;
  constexpr int kPoints = 200;
  const double top = std::log(0.999);
  const double bottom = std::log(1e-8);
  double prev = -kInf;
  for (int k = 0; k < kPoints; ++k) {
    const double s = std::exp(top + (bottom - top) * k / (kPoints - 1));
    const double d = m.quantile(1.0 - s);
    const double sd = m.survival(d);
    if (sd <= 0.0) break;
    const double r = m.survival(d + w) / sd;
    if (r < prev - 1e-12) return false;
    prev = r;
  }
  return true;
}

HRoot h_root(const LossModel& m, const PremiumParams& p, double alpha, double a) {
  const auto t = scheme_thresholds(p, a);
  if (t.constant || t.d_I == 0.0) {
    throw UnsupportedError("h_root: needs delta > 0 and a floor layer d_I > 0");
  }
  const double v = alpha < 1.0 ? m.quantile(1.0 - alpha) : 0.0;
  const double lo = std::max(0.0, v - t.d_I);
  const double hi = v;
  auto h = [&](double d1) { return H(m, p, alpha, a, d1); };
  if (hi <= lo) return {lo, h(lo), false};
  const double h_hi = h(hi);
  const double root = numeric::bisect_first_nonnegative(h, lo, hi);
  return {root, h(root), !(h_hi < 0.0)};
}

InnerSolution solve_inner_scan(const LossModel& m, const PremiumParams& p,
                               const Distortion& g, double a, int grid) {
  check_mean(m, a, "solve_inner_scan");
  if (!g.concave()) {
    throw UnsupportedError("solve_inner_scan requires a concave distortion");
  }
  if (auto s = trivial_inner(g, m, p, a)) return *s;
  grid = std::max(grid, 100);
  const double dt = stop_loss_deductible(m, a);
  auto value = [&](double d1) { return I1_value(g, m, p, a, std::min(d1, dt)); };
  int best_k = 0;
  double best = value(0.0);
  for (int k = 1; k <= grid; ++k) {
    const double v = value(dt * k / grid);
    if (v < best - 1e-13 * std::abs(best)) {
      best = v;
      best_k = k;
    }
  }
  double d1 = dt * best_k / grid;
  const double lo = dt * std::max(best_k - 1, 0) / grid;
  const double hi = dt * std::min(best_k + 1, grid) / grid;
  const auto refined = numeric::golden_section(value, lo, hi, 1e-6 * dt);
  if (refined.value < best - 1e-13 * std::abs(best)) d1 = refined.x;
  return from_d1(g, m, p, a, d1, "scan");
}

InnerSolution solve_inner_tvar(const LossModel& m, const PremiumParams& p,
                               double alpha, double a) {
  check_mean(m, a, "solve_inner_tvar");
  const auto g = Distortion::tvar(alpha);
  if (auto s = trivial_inner(g, m, p, a)) {
    s->ratio_verified = true;
    return *s;
  }
  const auto t = scheme_thresholds(p, a);
  if (!ratio_condition_holds(m, t.u_I - t.d_I)) {
    auto s = solve_inner_scan(m, p, g, a);
    s.warnings.push_back(
        "survival ratio S(d+u_I-d_I)/S(d) not nondecreasing; used the scan");
    return s;
  }
  const auto root = h_root(m, p, alpha, a);
  if (!root.bracketed) {
    auto s = solve_inner_scan(m, p, g, a);
    s.warnings.push_back("H has no sign change on its bracket; used the scan");
    s.ratio_verified = true;
    return s;
  }
  auto s = from_d1(g, m, p, a, root.d1, "bisection");
  s.h_residual = root.residual;
  s.ratio_verified = true;
  return s;
}

InnerSolution solve_inner(const LossModel& m, const PremiumParams& p,
                          const Distortion& g, double a,
                          const SolverSettings& s) {
  if (g.kind() == DistortionKind::TVaR) return solve_inner_tvar(m, p, g.level(), a);
  return solve_inner_scan(m, p, g, a, s.inner_grid);
}

SolveReport solve_insurer(const LossModel& m, const PremiumParams& p,
                          const Distortion& g, const SolverSettings& s) {
  if (!g.concave()) {
    throw UnsupportedError("solve_insurer requires a concave distortion");
  }
  SolveReport rep;
  rep.settings = s;
  const int n = std::max(s.outer_grid, 2);
  const double mean = m.mean();
  const double rho_x = rho_loss(g, m);

  std::vector<InnerSolution> inner(static_cast<std::size_t>(n));
  detail::parallel_for(inner.size(), s.threads, [&](std::size_t k) {
    inner[k] = solve_inner(m, p, g, mean * static_cast<double>(k + 1) / n, s);
  });

  rep.trace.push_back({0.0, 0.0, std::nullopt, rho_x, InnerBranch::NoTrade});
  for (const auto& in : inner) {
    rep.trace.push_back({in.a, in.d1, in.d2, in.value, in.branch});
    for (const auto& w : in.warnings) {
      if (std::find(rep.warnings.begin(), rep.warnings.end(), w) == rep.warnings.end()) {
        rep.warnings.push_back(w);
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < rep.trace.size(); ++k) {
    if (rep.trace[k].value < rep.trace[best].value) best = k;
  }
  auto objective = [&](double a) {
    return a <= 0.0 ? rho_x : solve_inner(m, p, g, a, s).value;
  };
  const double lo = rep.trace[best > 0 ? best - 1 : 0].a;
  const double hi = rep.trace[std::min(best + 1, rep.trace.size() - 1)].a;
  double a_star = rep.trace[best].a;
  double v_star = rep.trace[best].value;
  if (hi > lo) {
    const auto r = numeric::golden_section(objective, lo, hi, s.refine_rel * mean);
    if (r.value < v_star) {
      a_star = r.x;
      v_star = r.value;
    }
  }

  if (a_star <= 0.0) {
    rep.inner.a = 0.0;
    rep.inner.value = rho_x;
    rep.inner.branch = InnerBranch::NoTrade;
    rep.inner.method = "closed";
    rep.inner.ratio_verified = true;
  } else {
    rep.inner = solve_inner(m, p, g, a_star, s);
    for (const auto& w : rep.inner.warnings) {
      if (std::find(rep.warnings.begin(), rep.warnings.end(), w) == rep.warnings.end()) {
        rep.warnings.push_back(w);
      }
    }
  }
  rep.contract = rep.inner.contract;
  rep.a_star = a_star;
  rep.value = rep.inner.value;
  return rep;
}

DominanceResult verify_I2_dominated(const LossModel& m, const PremiumParams& p,
                                    const Distortion& g, double a, int grid) {
  check_mean(m, a, "verify_I2_dominated");
  if (!g.concave()) {
    throw UnsupportedError("verify_I2_dominated requires a concave distortion");
  }
  grid = std::max(grid, 2);
  const double i1_min = solve_inner_scan(m, p, g, a, grid).value;
  if (p.constant_premium()) return {true, 0.0, true, i1_min, i1_min};
  const double dt = stop_loss_deductible(m, a);
  const double lb = std::min(i2_lower_bound(m, p, a), dt);
  double i2_min = kInf;
  double prev = kInf;
  bool nonincreasing = true;
  for (int k = 0; k <= grid; ++k) {
    const double d1 = lb + (dt - lb) * k / grid;
    double v;
    if (k == grid) {
      v = stop_loss_value(g, m, p, a, dt);
    } else {
      const auto I = complete_I2(m, p, a, d1);
      const auto& l = std::get<TwoLayerLayout>(I.layout());
      v = rho_T_I2_closed(g, m, p, a, l.d1, l.d2);
    }
    if (v > prev + 1e-9 * std::max(1.0, std::abs(prev))) nonincreasing = false;
    prev = v;
    i2_min = std::min(i2_min, v);
  }
  const double margin = i2_min - i1_min;
  return {margin >= -1e-8, margin, nonincreasing, i1_min, i2_min};
}

}  // namespace repremia

#include "repremia/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "repremia/errors.hpp"
#include "repremia/numeric.hpp"
#include "repremia/premium.hpp"

namespace repremia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBatches = 20;

double estimate_sorted_desc(const Distortion& g, const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (g.kind() == DistortionKind::TVaR) {
    const auto k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(g.level() * static_cast<double>(n) - 1e-9)));
    return std::accumulate(v.begin(), v.begin() + static_cast<long>(std::min(k, n)), 0.0) /
           static_cast<double>(std::min(k, n));
  }
  double total = 0.0;
  double g_prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g_next = g(static_cast<double>(i + 1) / static_cast<double>(n));
    total += v[i] * (g_next - g_prev);
    g_prev = g_next;
  }
  return total;
}

double estimate(const Distortion& g, std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return estimate_sorted_desc(g, v);
}

// Mean contributed by the increments of f on [lo, hi].
double increments(const PiecewiseLinear& f, const LossModel& m, double lo,
                  double hi) {
  double total = 0.0;
  for (std::size_t i = 0; i < f.segment_count(); ++i) {
    const double s = f.slopes()[i];
    const double l = std::max(lo, f.segment_begin(i));
    const double u = std::min(hi, f.segment_end(i));
    if (s == 0.0 || u <= l) continue;
    total += s * m.layer_mean(l, u);
  }
  return total;
}

PiecewiseLinear total_position(const PremiumParams& p, const Indemnity& I,
                               const LossModel& m) {
  return insurer_position(p, bind_thresholds(p, I, m), I);
}

double mean_total(const PremiumParams& p, const Indemnity& I, const LossModel& m) {
  return total_position(p, I, m).expectation(m);
}

// Root of a nonincreasing residual with residual(lo) >= 0; hi is grown from
// lo until the residual turns nonpositive when it is infinite.
double match_decreasing(const std::function<double(double)>& residual,
                        double lo, double hi, double scale, const char* what) {
  const double tol = 1e-12 * scale;
  if (residual(lo) < -tol) {
    throw ConstructionError(std::string(what) +
                            ": mean residual negative at the lower bracket end");
  }
  if (std::isinf(hi)) {
    double step = std::max(1.0, lo);
    hi = lo + step;
    for (int i = 0; i < 200 && residual(hi) > 0.0; ++i) {
      step *= 2.0;
      hi = lo + step;
    }
  }
  if (residual(hi) > tol) {
    throw ConstructionError(std::string(what) +
                            ": mean residual positive at the upper bracket end");
  }
  if (residual(lo) <= 0.0) return lo;
  if (residual(hi) >= 0.0) return hi;
  return numeric::bisect_decreasing(residual, lo, hi, 0.0);
}

Improved finish(Indemnity result, const Indemnity& input, const LossModel& m,
                const PremiumParams& p, std::vector<std::string> notes) {
  Improved out;
  out.certificate = convex_order_check(total_position(p, result, m),
                                       total_position(p, input, m), m);
  out.contract = std::move(result);
  out.notes = std::move(notes);
  return out;
}

}  // namespace

MCEstimate mc_estimate(const Distortion& g, const std::vector<double>& values) {
  if (values.size() < kBatches) {
    throw DomainError("mc_estimate: need at least 20 values");
  }
  MCEstimate e;
  e.n = values.size();
  e.estimator = g.kind() == DistortionKind::TVaR ? "tvar_tail_mean" : "l_statistic";
  e.value = estimate(g, values);
  const std::size_t per = values.size() / kBatches;
  std::vector<double> batch_values;
  for (std::size_t b = 0; b < kBatches; ++b) {
    const auto first = values.begin() + static_cast<long>(b * per);
    batch_values.push_back(estimate(g, std::vector<double>(first, first + static_cast<long>(per))));
  }
  const double mb = std::accumulate(batch_values.begin(), batch_values.end(), 0.0) / kBatches;
  double ss = 0.0;
  for (double v : batch_values) ss += (v - mb) * (v - mb);
  e.std_error = std::sqrt(ss / (kBatches - 1) / kBatches);
  return e;
}

MCEstimate mc_rho(const Distortion& g, const PiecewiseLinear& position,
                  const LossModel& m, std::size_t n, std::uint64_t seed) {
  if (n < 1000) throw DomainError("mc_rho: need n >= 1000");
  auto xs = m.sample(n, seed);
  for (auto& x : xs) x = position(x);
  auto e = mc_estimate(g, xs);
  e.seed = seed;
  return e;
}

ConvexOrderResult convex_order_check(const PiecewiseLinear& z1,
                                     const PiecewiseLinear& z2,
                                     const LossModel& m, std::size_t t_grid) {
  if (!z1.nondecreasing() || !z2.nondecreasing()) {
    throw DomainError("convex_order_check: transforms must be nondecreasing");
  }
  const double tol = 1e-7 * m.mean();
  ConvexOrderResult r;
  r.mean_gap = std::abs(z1.expectation(m) - z2.expectation(m));

  std::vector<double> ts;
  for (const auto* z : {&z1, &z2}) {
    for (double k : z->knots()) ts.push_back((*z)(k));
    for (int j = 1; j <= 8; ++j) ts.push_back((*z)(m.quantile(1.0 - std::pow(10.0, -j))));
  }
  const auto [lo_it, hi_it] = std::minmax_element(ts.begin(), ts.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  for (std::size_t i = 0; i < t_grid; ++i) {
    ts.push_back(lo + (hi - lo) * static_cast<double>(i) / std::max<std::size_t>(t_grid - 1, 1));
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  r.max_violation = -kInf;
  for (double t : ts) {
    const double v = z1.stop_loss_transform(m, t) - z2.stop_loss_transform(m, t);
    if (v > r.max_violation) {
      r.max_violation = v;
      r.t_at_max = t;
    }
  }
  r.points = ts.size();
  r.holds = r.mean_gap <= tol && r.max_violation <= tol;
  return r;
}

Improved improve_to_S3(const Indemnity& I, const LossModel& m,
                       const PremiumParams& p) {
  const double a = ceded_mean(I, m);
  if (I.is_zero() || a <= 0.0) {
    return finish(Indemnity::zero(), I, m, p, {"zero ceded mean: zero contract"});
  }
  if (p.constant_premium()) {
    return finish(Indemnity::stop_loss(m.invert_stop_loss(std::min(a, m.mean()))),
                  I, m, p, {"constant premium: stop-loss with the same mean"});
  }
  const auto t = scheme_thresholds(p, a);
  const double w = t.u_I - t.d_I;
  const auto th = thresholds(I, t);
  if (std::isinf(th.x_d)) {
    throw ConstructionError("improve_to_S3: x_d infinite with a positive ceded mean");
  }
  const auto& f = I.function();
  std::vector<std::string> notes;

  // f1: keep I up to x_u, then a flat stretch and a unit-slope layer from e
  double e = kInf;
  if (std::isfinite(th.x_u)) {
    const double rest = a - increments(f, m, 0.0, th.x_u);
    if (rest > 1e-14 * a) e = std::max(m.invert_stop_loss(std::min(rest, m.mean())), th.x_u);
    notes.push_back("f1: e = " + std::to_string(e));
  } else {
    notes.push_back("f1: skipped (x_u infinite)");
  }

  // f2: the band between x_d and e becomes one layer of width u_I - d_I
  const double tail = std::isfinite(e) ? m.layer_mean(e, kInf) : 0.0;
  const double base = increments(f, m, 0.0, th.x_d);
  const double target2 = a - base - tail;
  const double c_hi = std::isfinite(e) ? std::max(th.x_d, e - w) : kInf;
  const double c = match_decreasing(
      [&](double cc) { return m.layer_mean(cc, cc + w) - target2; }, th.x_d, c_hi,
      a, "f2");
  notes.push_back("f2: c = " + std::to_string(c));

  // f3: below c the contract becomes (x - a')_+ capped at d_I
  double a3 = c;
  if (t.d_I > 0.0) {
    a3 = match_decreasing(
        [&](double aa) { return m.layer_mean(aa, aa + t.d_I) - base; }, 0.0,
        std::max(0.0, c - t.d_I), a, "f3");
  }
  notes.push_back("f3: a = " + std::to_string(a3));

  ThreeLayerLayout l;
  l.a = a3;
  l.b = std::min(a3 + t.d_I, c);
  l.c = c;
  l.d = c + w;
  if (std::isfinite(e)) l.e = std::max(e, l.d);
  return finish(Indemnity::three_layer(l), I, m, p, std::move(notes));
}

Improved improve_to_two_layer(const Indemnity& I3, const LossModel& m,
                              const PremiumParams& p) {
  const Family fam = I3.family();
  if (I3.is_zero() || fam == Family::StopLoss || fam == Family::I1 ||
      fam == Family::I2 || p.constant_premium()) {
    return finish(I3, I3, m, p, {"already a two-layer member"});
  }
  if (fam != Family::S3) {
    throw DomainError("improve_to_two_layer expects a three-layer contract");
  }
  const double a = ceded_mean(I3, m);
  if (a <= 0.0) return finish(Indemnity::zero(), I3, m, p, {"zero ceded mean"});
  const auto t = scheme_thresholds(p, a);
  const auto th = thresholds(I3, t);
  const auto& l = std::get<ThreeLayerLayout>(I3.layout());
  const double dt = m.invert_stop_loss(std::min(a, m.mean()));
  std::vector<std::string> notes;

  const double x1 = std::min(l.a, dt);
  const auto h1 = complete_I1(m, p, a, x1);

  const double tail = std::isfinite(th.x_u) ? increments(I3.function(), m, th.x_u, kInf) : 0.0;
  const double c2 = match_decreasing(
      [&](double cc) { return m.layer_mean(cc, cc + t.u_I) + tail - a; }, 0.0,
      std::max(0.0, std::isfinite(th.x_u) ? th.x_u - t.u_I : dt), a, "h2");
  const auto h2 = complete_I2(m, p, a, c2);

  const double tau = mean_total(p, I3, m);
  const double e1 = mean_total(p, h1, m);
  const double e2 = mean_total(p, h2, m);
  const double e_sl = mean_total(p, Indemnity::stop_loss(dt), m);
  const double tol = 1e-12 * std::max(1.0, std::abs(tau));
  notes.push_back("E[T]: h1 " + std::to_string(e1) + ", input " + std::to_string(tau) +
                  ", h2 " + std::to_string(e2));

  Indemnity h = Indemnity::zero();
  if (tau <= e_sl) {
    if (tau <= e1 + tol) {
      if (tau < e1 - 1e-9 * std::max(1.0, std::abs(tau))) notes.push_back("clamped to h1");
      h = h1;
    } else {
      const double x = numeric::bisect_first_nonnegative(
          [&](double xx) { return mean_total(p, complete_I1(m, p, a, xx), m) - tau; }, x1, dt);
      h = x >= dt * (1.0 - 1e-12) ? Indemnity::stop_loss(dt) : complete_I1(m, p, a, x);
      notes.push_back("interpolated in I1 at d1 = " + std::to_string(x));
    }
  } else {
    if (tau >= e2 - tol) {
      if (tau > e2 + 1e-9 * std::max(1.0, std::abs(tau))) notes.push_back("clamped to h2");
      h = h2;
    } else {
      const double y = numeric::bisect_first_nonnegative(
          [&](double yy) { return tau - mean_total(p, complete_I2(m, p, a, yy), m); }, c2, dt);
      h = y >= dt * (1.0 - 1e-12) ? Indemnity::stop_loss(dt) : complete_I2(m, p, a, y);
      notes.push_back("interpolated in I2 at d1 = " + std::to_string(y));
    }
  }
  return finish(std::move(h), I3, m, p, std::move(notes));
}

BruteForceResult brute_force_insurer(const LossModel& m, const PremiumParams& p,
                                     const Distortion& g,
                                     const BruteForceOptions& opt) {
  if (opt.a_grid < 50 || opt.d1_grid < 50) {
    throw DomainError("brute_force_insurer: grids need at least 50 points");
  }
  BruteForceResult best;
  best.value = rho_loss(g, m);
  best.evaluated = 1;
  auto consider = [&](double v, double a, double d1, Family fam,
                      const std::function<Indemnity()>& make) {
    ++best.evaluated;
    if (v < best.value) {
      best.value = v;
      best.a = a;
      best.d1 = d1;
      best.family = fam;
      best.contract = make();
    }
  };
  const double mean = m.mean();
  for (int ka = 1; ka <= opt.a_grid; ++ka) {
    const double a = mean * ka / opt.a_grid;
    const double dt = m.invert_stop_loss(std::min(a, mean));
    if (p.constant_premium()) {
      const double v = distorted_layer(g, m, 0.0, dt) + (1.0 + p.theta0()) * a;
      consider(v, a, dt, Family::StopLoss, [&] { return Indemnity::stop_loss(dt); });
      continue;
    }
    const auto t = scheme_thresholds(p, a);
    if (t.d_I == 0.0) {
      // zero-width first layer: every d1 gives the stop-loss at d~
      const auto I = Indemnity::stop_loss(dt);
      consider(rho_T_I1_closed(g, m, p, a, dt, std::nullopt), a, dt, Family::StopLoss,
               [&] { return I; });
    }
    for (int kd = 0; kd <= (t.d_I == 0.0 ? -1 : opt.d1_grid); ++kd) {
      const double d1 = dt * kd / opt.d1_grid;
      const auto I = complete_I1(m, p, a, d1);
      const auto& l = std::get<TwoLayerLayout>(I.layout());
      consider(rho_T_I1_closed(g, m, p, a, l.d1, l.d2), a, d1, Family::I1,
               [&] { return I; });
    }
    if (opt.include_I2 && g.concave()) {
      const double lb = std::min(i2_lower_bound(m, p, a), dt);
      for (int kd = 0; kd <= opt.d1_grid; ++kd) {
        const double d1 = lb + (dt - lb) * kd / opt.d1_grid;
        const auto I = complete_I2(m, p, a, d1);
        const auto& l = std::get<TwoLayerLayout>(I.layout());
        consider(rho_T_I2_closed(g, m, p, a, l.d1, l.d2), a, d1, Family::I2,
                 [&] { return I; });
      }
    }
    if (opt.s3_grid > 0) {
      const double w = t.u_I - t.d_I;
      const double span = m.quantile(0.999);
      for (int i = 0; i <= opt.s3_grid; ++i) {
        const double a1 = dt * i / opt.s3_grid;
        const double first = m.layer_mean(a1, a1 + t.d_I);
        for (int j = 0; j <= opt.s3_grid; ++j) {
          const double c = a1 + t.d_I + span * j / opt.s3_grid;
          const double rest = a - first - m.layer_mean(c, c + w);
          if (rest < 0.0) continue;
          std::optional<double> e;
          if (rest > 1e-14 * a) {
            const double ev = m.invert_stop_loss(std::min(rest, mean));
            if (ev < c + w) continue;
            e = ev;
          }
          const auto I = Indemnity::three_layer({a1, a1 + t.d_I, c, c + w, e});
          const double v = rho_monotone_transform(g, m, total_position(p, I, m));
          consider(v, a, a1, Family::S3, [&] { return I; });
        }
      }
    }
  }
  return best;
}

}  // namespace repremia

namespace repremia {

std::uint64_t case_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace

LossModel random_loss(std::mt19937_64& rng) {
  if (std::bernoulli_distribution(0.5)(rng)) {
    return LossModel::exponential(log_uniform(rng, 0.5, 4.0));
  }
  const double eta = log_uniform(rng, 0.5, 4.0);
  return LossModel::pareto(eta, log_uniform(rng, 1.5, 4.0));
}

PremiumParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double delta = 0.05 + 0.95 * u(rng);
  const double theta0 = 0.1 + 1.4 * u(rng);
  const double lo = std::max(theta0 - delta, 0.0);
  const double theta1 = lo + (theta0 - lo) * u(rng);
  const double theta2 = theta0 + 0.1 + 2.9 * u(rng);
  return PremiumParams::make(delta, theta0, theta1, theta2);
}

Indemnity random_indemnity(std::mt19937_64& rng, const LossModel& m,
                           int max_breakpoints, bool half_slopes) {
  std::uniform_int_distribution<int> count(1, std::max(1, max_breakpoints));
  std::uniform_real_distribution<double> where(0.0, m.quantile(0.99));
  std::uniform_int_distribution<int> pick(0, half_slopes ? 2 : 1);
  const double choices[3] = {0.0, 1.0, 0.5};
  for (;;) {
    const int k = count(rng);
    std::vector<double> xs{0.0};
    for (int i = 0; i < k; ++i) xs.push_back(where(rng));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> slopes;
    for (std::size_t i = 0; i < xs.size(); ++i) slopes.push_back(choices[pick(rng)]);
    auto I = Indemnity::general(PiecewiseLinear(0.0, xs, slopes));
    if (ceded_mean(I, m) > 1e-6 * m.mean()) return I;
  }
}

}  // namespace repremia

#include "repremia/riskmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "repremia/errors.hpp"

namespace repremia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_level(double v, const char* what) {
  if (!(v > 0.0 && v <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in (0,1]");
  }
}

// Integral of S^k over [l, u] for the Pareto model, k = zeta * beta.
double pareto_power_layer(double eta, double k, double l, double u) {
  const double xl = l + eta;
  if (k == 1.0) {
    if (std::isinf(u)) return kInf;
    return eta * std::log1p((u - l) / xl);
  }
  if (k > 1.0) {
    const double head = eta / (k - 1.0) * std::pow(eta / xl, k - 1.0);
    if (std::isinf(u)) return head;
    return head * -std::expm1((1.0 - k) * std::log1p((u - l) / xl));
  }
  if (std::isinf(u)) return kInf;
  return eta / (1.0 - k) *
         (std::pow((u + eta) / eta, 1.0 - k) - std::pow(xl / eta, 1.0 - k));
}

double quadrature_layer(const Distortion& d, const LossModel& m, double l,
                        double u) {
  u = std::min(u, m.ess_sup());
  if (u <= l) return 0.0;
  std::vector<double> cuts{l};
  if (m.kind() == LossKind::Tabulated) {
    for (const auto& [x, s] : m.points()) {
      if (x > l && x < u) cuts.push_back(x);
    }
  }
  if (d.kind() == DistortionKind::Custom) {
    for (const auto& [pk, gk] : d.table()) {
      if (pk <= 0.0 || pk >= 1.0) continue;
      const double x = m.quantile(1.0 - pk);
      if (x > l && x < u) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(u);
  auto integrand = [&](double x) { return d(m.survival(std::max(x, 0.0))); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, cuts[i], cuts[i + 1], 15, 1e-12, &err);
  }
  return total;
}

}  // namespace

Distortion Distortion::tvar(double alpha) {
  require_level(alpha, "TVaR alpha");
  Distortion d;
  d.kind_ = DistortionKind::TVaR;
  d.level_ = alpha;
  d.concave_ = true;
  return d;
}

Distortion Distortion::var(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("VaR alpha must lie in (0,1)");
  Distortion d;
  d.kind_ = DistortionKind::VaR;
  d.level_ = alpha;
  d.concave_ = false;
  return d;
}

Distortion Distortion::power(double beta) {
  require_level(beta, "power beta");
  Distortion d;
  d.kind_ = DistortionKind::Power;
  d.level_ = beta;
  d.concave_ = true;
  return d;
}

Distortion Distortion::custom(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2 || table.front() != std::pair{0.0, 0.0} ||
      table.back() != std::pair{1.0, 1.0}) {
    throw DomainError("custom distortion table must run from (0,0) to (1,1)");
  }
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].first > table[i - 1].first)) {
      throw DomainError("custom distortion: p must be strictly increasing");
    }
    if (table[i].second < table[i - 1].second) {
      throw DomainError("custom distortion: g must be nondecreasing");
    }
  }
  Distortion d;
  d.kind_ = DistortionKind::Custom;
  d.level_ = std::numeric_limits<double>::quiet_NaN();
  d.table_ = std::move(table);
  // concave iff the chord slopes never increase
  d.concave_ = true;
  double prev = kInf;
  for (std::size_t i = 1; i < d.table_.size(); ++i) {
    const double s = (d.table_[i].second - d.table_[i - 1].second) /
                     (d.table_[i].first - d.table_[i - 1].first);
    if (s > prev + 1e-12) d.concave_ = false;
    prev = s;
  }
  return d;
}

Distortion Distortion::with_level(double level) const {
  switch (kind_) {
    case DistortionKind::TVaR: return tvar(level);
    case DistortionKind::VaR: return var(level);
    case DistortionKind::Power: return power(level);
    case DistortionKind::Custom: break;
  }
  throw UnsupportedError("custom distortions have no level");
}

double Distortion::operator()(double p) const {
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw DomainError("distortion argument must lie in [0,1]");
  }
  switch (kind_) {
    case DistortionKind::TVaR:
      return std::min(p / level_, 1.0);
    case DistortionKind::VaR:
      return p > level_ ? 1.0 : 0.0;
    case DistortionKind::Power:
      return std::pow(p, level_);
    case DistortionKind::Custom: {
      auto it = std::upper_bound(
          table_.begin(), table_.end(), p,
          [](double v, const std::pair<double, double>& q) { return v < q.first; });
      if (it == table_.end()) return 1.0;
      const auto& [pr, gr] = *it;
      const auto& [pl, gl] = *(it - 1);
      return gl + (gr - gl) * (p - pl) / (pr - pl);
    }
  }
  return 0.0;
}

std::string Distortion::describe() const {
  char buf[64];
  switch (kind_) {
    case DistortionKind::TVaR:
      std::snprintf(buf, sizeof buf, "TVaR(%.12g)", level_);
      return buf;
    case DistortionKind::VaR:
      std::snprintf(buf, sizeof buf, "VaR(%.12g)", level_);
      return buf;
    case DistortionKind::Power:
      std::snprintf(buf, sizeof buf, "Power(%.12g)", level_);
      return buf;
    case DistortionKind::Custom:
      return "Custom(" + std::to_string(table_.size()) + " points)";
  }
  return "?";
}

double g_eval(const Distortion& d, double p) { return d(p); }

double distorted_layer(const Distortion& d, const LossModel& m, double l,
                       double u) {
  if (std::isnan(l) || std::isnan(u) || l < 0.0) {
    throw DomainError("distorted_layer: lower bound must be >= 0");
  }
  if (l > u) throw DomainError("distorted_layer: l > u");
  if (l == u || std::isinf(l)) return 0.0;
  switch (d.kind()) {
    case DistortionKind::TVaR: {
      const double alpha = d.level();
      if (alpha >= 1.0) return m.layer_mean(l, u);
      const double v = m.quantile(1.0 - alpha);
      double total = std::max(0.0, std::min(u, v) - l);
      const double lo = std::max(l, v);
      if (u > lo) total += m.layer_mean(lo, u) / alpha;
      return total;
    }
    case DistortionKind::VaR: {
      const double v = m.quantile(1.0 - d.level());
      return std::max(0.0, std::min(u, v) - l);
    }
    case DistortionKind::Power: {
      const double beta = d.level();
      if (beta == 1.0) return m.layer_mean(l, u);
      if (m.kind() == LossKind::Pareto) {
        return pareto_power_layer(m.eta(), m.zeta() * beta, l, u);
      }
      if (m.kind() == LossKind::Exponential) {
        const double scale = m.mu() / beta;
        const double head = scale * std::exp(-l / scale);
        if (std::isinf(u)) return head;
        return head * -std::expm1(-(u - l) / scale);
      }
      return quadrature_layer(d, m, l, u);
    }
    case DistortionKind::Custom:
      return quadrature_layer(d, m, l, u);
  }
  return 0.0;
}

double rho_monotone_transform(const Distortion& d, const LossModel& m,
                              const PiecewiseLinear& t) {
  double total = t.value0();
  for (std::size_t i = 0; i < t.segment_count(); ++i) {
    const double s = t.slopes()[i];
    if (s < -1e-12) {
      throw DomainError(
          "rho_monotone_transform: position has a decreasing segment");
    }
    if (s <= 0.0) continue;
    total += s * distorted_layer(d, m, t.segment_begin(i), t.segment_end(i));
  }
  return total;
}

double rho_loss(const Distortion& d, const LossModel& m) {
  return distorted_layer(d, m, 0.0, kInf);
}

namespace {

struct Widths {
  double d_I;
  double u_I;
};

Widths closed_form_widths(const PremiumParams& p, double a, double d1,
                          double d2, bool i1) {
  if (p.constant_premium()) {
    throw UnsupportedError(
        "layer families are undefined for the constant premium");
  }
  if (std::isnan(a) || a < 0.0) throw DomainError("ceded mean must be >= 0");
  const Widths w{floor_width_factor(p) * a, cap_width_factor(p) * a};
  const double first = i1 ? w.d_I : w.u_I;
  if (std::isnan(d1) || d1 < 0.0) throw DomainError("layout: d1 must be >= 0");
  if (d2 < d1 + first - 1e-12 * std::max(1.0, d2)) {
    throw InfeasibleError("layout: violated d2 >= d1 + first layer width");
  }
  return w;
}

}  // namespace

double rho_T_I1_closed(const Distortion& d, const LossModel& m,
                       const PremiumParams& p, double a, double d1,
                       std::optional<double> d2_opt) {
  const double d2 = d2_opt ? *d2_opt : kInf;
  const auto w = closed_form_widths(p, a, d1, d2, true);
  const double top = std::max(d2, d1 + w.d_I);
  double v = distorted_layer(d, m, 0.0, d1) +
             distorted_layer(d, m, d1 + w.d_I, top) +
             (1.0 + p.theta1()) * a;
  if (std::isfinite(top)) {
    v += p.delta() * distorted_layer(d, m, top, top + (w.u_I - w.d_I));
  }
  return v;
}

double rho_T_I2_closed(const Distortion& d, const LossModel& m,
                       const PremiumParams& p, double a, double d1,
                       std::optional<double> d2_opt) {
  if (!d.concave()) {
    throw UnsupportedError("rho_T_I2_closed requires a concave distortion");
  }
  const double d2 = d2_opt ? *d2_opt : kInf;
  const auto w = closed_form_widths(p, a, d1, d2, false);
  const double top = std::max(d2, d1 + w.u_I);
  return distorted_layer(d, m, 0.0, d1) +
         p.delta() * distorted_layer(d, m, d1 + w.d_I, d1 + w.u_I) +
         distorted_layer(d, m, d1 + w.u_I, top) + (1.0 + p.theta1()) * a;
}

}  // namespace repremia

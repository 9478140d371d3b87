#include "repremia/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "repremia/errors.hpp"

namespace repremia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw DomainError(std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

LossModel LossModel::pareto(double eta, double zeta) {
  require_finite_positive(eta, "pareto eta");
  if (!std::isfinite(zeta) || zeta <= 1.0) {
    throw DomainError("pareto zeta must be > 1 (finite mean)");
  }
  LossModel m;
  m.kind_ = LossKind::Pareto;
  m.eta_ = eta;
  m.zeta_ = zeta;
  m.mean_ = eta / (zeta - 1.0);
  return m;
}

LossModel LossModel::exponential(double mu) {
  require_finite_positive(mu, "exponential mu");
  LossModel m;
  m.kind_ = LossKind::Exponential;
  m.mu_ = mu;
  m.mean_ = mu;
  return m;
}

LossModel LossModel::tabulated(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw DomainError("tabulated model needs points");
  if (points.front().first < 0.0) {
    throw DomainError("tabulated grid must start at x >= 0");
  }
  if (points.front().first > 0.0) {
    points.insert(points.begin(), {0.0, 1.0});
  } else if (points.front().second != 1.0) {
    throw DomainError("tabulated survival must equal 1 at x = 0");
  }
  if (points.size() < 2) {
    throw DomainError("tabulated model needs at least two grid points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [x, s] = points[i];
    if (!std::isfinite(x) || !std::isfinite(s) || s < 0.0 || s > 1.0) {
      throw DomainError("tabulated point " + std::to_string(i) +
                        " is not a finite (x, S) with S in [0,1]");
    }
    if (i > 0) {
      if (x <= points[i - 1].first) {
        throw DomainError("tabulated x grid must be strictly increasing");
      }
      if (s >= points[i - 1].second) {
        throw DomainError(
            "tabulated survival must be strictly decreasing (flat segments "
            "are rejected)");
      }
    }
  }
  LossModel m;
  m.kind_ = LossKind::Tabulated;
  m.points_ = std::move(points);
  const auto& p = m.points_;
  const auto [x1, s1] = p[p.size() - 2];
  const auto [x2, s2] = p.back();
  m.tail_rate_ = s2 > 0.0 ? std::log(s1 / s2) / (x2 - x1) : 0.0;
  m.mean_ = m.tab_layer(0.0, kInf);
  return m;
}

double LossModel::survival(double x) const {
  if (std::isnan(x) || x < 0.0) throw DomainError("survival: x must be >= 0");
  switch (kind_) {
    case LossKind::Pareto:
      if (std::isinf(x)) return 0.0;
      return std::pow(eta_ / (x + eta_), zeta_);
    case LossKind::Exponential:
      return std::exp(-x / mu_);
    case LossKind::Tabulated:
      return tab_survival(x);
  }
  return 0.0;
}

double LossModel::tab_survival(double x) const {
  const auto& p = points_;
  if (x >= p.back().first) {
    if (p.back().second == 0.0) return 0.0;
    return p.back().second * std::exp(-tail_rate_ * (x - p.back().first));
  }
  auto it = std::upper_bound(
      p.begin(), p.end(), x,
      [](double v, const std::pair<double, double>& q) { return v < q.first; });
  const auto& [xr, sr] = *it;
  const auto& [xl, sl] = *(it - 1);
  return sl + (sr - sl) * (x - xl) / (xr - xl);
}

double LossModel::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: p must lie in (0,1)");
  }
  switch (kind_) {
    case LossKind::Pareto:
      return eta_ * std::expm1(-std::log1p(-p) / zeta_);
    case LossKind::Exponential:
      return -mu_ * std::log1p(-p);
    case LossKind::Tabulated:
      return tab_quantile(p);
  }
  return 0.0;
}

double LossModel::tab_quantile(double p) const {
  const double s = 1.0 - p;
  const auto& pts = points_;
  if (s < pts.back().second) {
    return pts.back().first + std::log(pts.back().second / s) / tail_rate_;
  }
  // First grid point with S <= s; S is strictly decreasing.
  auto it = std::find_if(pts.begin(), pts.end(),
                         [s](const auto& q) { return q.second <= s; });
  const auto& [xr, sr] = *it;
  if (it == pts.begin()) return xr;
  const auto& [xl, sl] = *(it - 1);
  return xl + (sl - s) / (sl - sr) * (xr - xl);
}

double LossModel::layer_mean(double l, double u) const {
  if (std::isnan(l) || std::isnan(u) || l < 0.0) {
    throw DomainError("layer_mean: lower bound must be >= 0");
  }
  if (l > u) throw DomainError("layer_mean: l > u");
  if (l == u || std::isinf(l)) return 0.0;
  switch (kind_) {
    case LossKind::Pareto: {
      // eta^zeta (x+eta)^(1-zeta) / (zeta-1), differenced without cancellation
      const double head =
          eta_ / (zeta_ - 1.0) * std::pow(eta_ / (l + eta_), zeta_ - 1.0);
      if (std::isinf(u)) return head;
      return head * -std::expm1((1.0 - zeta_) * std::log1p((u - l) / (l + eta_)));
    }
    case LossKind::Exponential: {
      const double head = mu_ * std::exp(-l / mu_);
      if (std::isinf(u)) return head;
      return head * -std::expm1(-(u - l) / mu_);
    }
    case LossKind::Tabulated:
      return tab_layer(l, u);
  }
  return 0.0;
}

double LossModel::tab_layer(double l, double u) const {
  const auto& p = points_;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double lo = std::max(l, p[i].first);
    const double hi = std::min(u, p[i + 1].first);
    if (hi <= lo) continue;
    total += 0.5 * (tab_survival(lo) + tab_survival(hi)) * (hi - lo);
  }
  const double x_last = p.back().first;
  const double s_last = p.back().second;
  if (s_last > 0.0 && u > x_last) {
    const double lo = std::max(l, x_last);
    const double head = s_last / tail_rate_ * std::exp(-tail_rate_ * (lo - x_last));
    total += std::isinf(u) ? head : head * -std::expm1(-tail_rate_ * (u - lo));
  }
  return total;
}

double LossModel::stop_loss(double d) const {
  if (std::isnan(d) || d < 0.0) throw DomainError("stop_loss: d must be >= 0");
  return layer_mean(d, kInf);
}

double LossModel::invert_stop_loss(double a) const {
  if (std::isnan(a) || a <= 0.0 || a > mean_ * (1.0 + 1e-12)) {
    throw DomainError("invert_stop_loss: need 0 < a <= mean");
  }
  if (a >= mean_) return 0.0;
  switch (kind_) {
    case LossKind::Pareto:
      return std::max(0.0, eta_ * std::expm1(-std::log(a / mean_) / (zeta_ - 1.0)));
    case LossKind::Exponential:
      return std::max(0.0, mu_ * std::log(mean_ / a));
    case LossKind::Tabulated:
      break;
  }
  double lo = 0.0;
  double hi = std::max(points_.back().first, 1.0);
  while (stop_loss(hi) > a) hi *= 2.0;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (stop_loss(mid) > a) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double LossModel::ess_sup() const {
  if (kind_ == LossKind::Tabulated && points_.back().second == 0.0) {
    return points_.back().first;
  }
  return kInf;
}

double LossModel::tail_ratio(double shift) const {
  switch (kind_) {
    case LossKind::Pareto:
      return 1.0;
    case LossKind::Exponential:
      return std::exp(-shift / mu_);
    case LossKind::Tabulated:
      return points_.back().second == 0.0 ? 0.0 : std::exp(-tail_rate_ * shift);
  }
  return 0.0;
}

std::vector<double> LossModel::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw DomainError("sample: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) {
    // 53 random bits mapped to the open interval (0,1); platform independent
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    v = quantile(u);
  }
  return out;
}

}  // namespace repremia

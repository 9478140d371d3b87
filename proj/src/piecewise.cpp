#include "repremia/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "repremia/errors.hpp"

namespace repremia {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PiecewiseLinear::PiecewiseLinear() : PiecewiseLinear(0.0, {0.0}, {0.0}) {}

PiecewiseLinear::PiecewiseLinear(double value0, std::vector<double> knots,
                                 std::vector<double> slopes)
    : value0_(value0), knots_(std::move(knots)), slopes_(std::move(slopes)) {
  if (knots_.empty() || knots_.size() != slopes_.size()) {
    throw DomainError("piecewise-linear: knots and slopes must be non-empty and aligned");
  }
  if (knots_.front() != 0.0) {
    throw DomainError("piecewise-linear: first knot must be 0");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i]) || !std::isfinite(slopes_[i])) {
      throw DomainError("piecewise-linear: knots and slopes must be finite");
    }
    if (i > 0 && knots_[i] <= knots_[i - 1]) {
      throw DomainError("piecewise-linear: knots must be strictly increasing");
    }
  }
  values_.resize(knots_.size());
  values_[0] = value0_;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    values_[i] = values_[i - 1] + slopes_[i - 1] * (knots_[i] - knots_[i - 1]);
  }
}

PiecewiseLinear PiecewiseLinear::from_ramps(
    double value0, const std::vector<std::pair<double, double>>& ramps) {
  std::vector<std::pair<double, double>> r;
  for (const auto& [at, w] : ramps) {
    if (std::isnan(at) || at < 0.0) {
      throw DomainError("piecewise-linear: ramp location must be >= 0");
    }
    if (std::isinf(at) || w == 0.0) continue;
    r.emplace_back(at, w);
  }
  std::sort(r.begin(), r.end());
  std::vector<double> knots{0.0};
  std::vector<double> slopes{0.0};
  for (const auto& [at, w] : r) {
    if (at == knots.back()) {
      slopes.back() += w;
    } else {
      knots.push_back(at);
      slopes.push_back(slopes.back() + w);
    }
  }
  return PiecewiseLinear(value0, std::move(knots), std::move(slopes)).simplified();
}

double PiecewiseLinear::segment_end(std::size_t i) const {
  return i + 1 < knots_.size() ? knots_[i + 1] : kInf;
}

double PiecewiseLinear::operator()(double x) const {
  if (x <= 0.0) return value0_;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return values_[i] + slopes_[i] * (x - knots_[i]);
}

double PiecewiseLinear::slope_at(double x) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), std::max(x, 0.0));
  return slopes_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

bool PiecewiseLinear::nondecreasing() const {
  return std::all_of(slopes_.begin(), slopes_.end(),
                     [](double s) { return s >= 0.0; });
}

double PiecewiseLinear::sup_level(double level) const {
  if (value0_ > level) return 0.0;
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const double s = slopes_[i];
    if (s <= 0.0) continue;
    const double end = segment_end(i);
    const double v_end = std::isinf(end) ? kInf : values_[i] + s * (end - knots_[i]);
    if (v_end > level) {
      return std::max(knots_[i], knots_[i] + (level - values_[i]) / s);
    }
  }
  return kInf;
}

PiecewiseLinear PiecewiseLinear::simplified() const {
  std::vector<double> k{knots_.front()};
  std::vector<double> s{slopes_.front()};
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (slopes_[i] == s.back()) continue;
    k.push_back(knots_[i]);
    s.push_back(slopes_[i]);
  }
  return {value0_, std::move(k), std::move(s)};
}

PiecewiseLinear PiecewiseLinear::operator+(const PiecewiseLinear& other) const {
  std::vector<double> k = knots_;
  k.insert(k.end(), other.knots_.begin(), other.knots_.end());
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  std::vector<double> s(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    s[i] = slope_at(k[i]) + other.slope_at(k[i]);
  }
  return PiecewiseLinear(value0_ + other.value0_, std::move(k), std::move(s))
      .simplified();
}

PiecewiseLinear PiecewiseLinear::operator-(const PiecewiseLinear& other) const {
  return *this + other.scaled(-1.0);
}

PiecewiseLinear PiecewiseLinear::scaled(double c) const {
  std::vector<double> s = slopes_;
  for (auto& v : s) v *= c;
  return {value0_ * c, knots_, std::move(s)};
}

PiecewiseLinear PiecewiseLinear::shifted(double k) const {
  return {value0_ + k, knots_, slopes_};
}

double PiecewiseLinear::expectation(const LossModel& m) const {
  double e = value0_;
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (slopes_[i] == 0.0) continue;
    e += slopes_[i] * m.layer_mean(knots_[i], segment_end(i));
  }
  return e;
}

double PiecewiseLinear::stop_loss_transform(const LossModel& m, double t) const {
  if (!nondecreasing()) {
    throw DomainError("stop_loss_transform: function must be nondecreasing");
  }
  if (value0_ > t) return expectation(m) - t;
  const double xt = sup_level(t);
  if (std::isinf(xt)) return 0.0;
  double e = 0.0;
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const double lo = std::max(knots_[i], xt);
    const double hi = segment_end(i);
    if (hi <= lo || slopes_[i] == 0.0) continue;
    e += slopes_[i] * m.layer_mean(lo, hi);
  }
  return e;
}

double max_abs_difference(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  if (std::abs(f.slopes_.back() - g.slopes_.back()) > 1e-12) return kInf;
  double worst = 0.0;
  for (double x : f.knots_) worst = std::max(worst, std::abs(f(x) - g(x)));
  for (double x : g.knots_) worst = std::max(worst, std::abs(f(x) - g(x)));
  return worst;
}

}  // namespace repremia

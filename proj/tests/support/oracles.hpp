#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's integrals or inverses.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n = 20000) {
  if (b <= a) return 0.0;
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Integral of f over [a, inf) through x = a + t / (1 - t).
inline double simpson_tail(const std::function<double(double)>& f, double a,
                           int n = 200000) {
  const double end = 1.0 - 1e-9;
  return simpson(
      [&](double t) {
        const double u = 1.0 - t;
        return f(a + t / u) / (u * u);
      },
      0.0, end, n);
}

/// Root of a continuous f with a sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if ((flo > 0.0) == (f(hi) > 0.0)) throw std::runtime_error("oracle: no sign change");
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double exp_survival(double mu, double x) { return std::exp(-x / mu); }
inline double pareto_survival(double eta, double zeta, double x) {
  return std::pow(eta / (x + eta), zeta);
}

}  // namespace oracle

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace repremia::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Smallest x in [lo, hi] with f(x) >= 0 for a nondecreasing f, located by
/// plain bisection. Returns lo when f(lo) >= 0 and hi when f(hi) < 0.
inline double bisect_first_nonnegative(const std::function<double(double)>& f,
                                       double lo, double hi,
                                       double x_tol = 0.0, int max_iter = 200) {
  if (f(lo) >= 0.0) return lo;
  if (f(hi) < 0.0) return hi;
  for (int i = 0; i < max_iter && hi - lo > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// Root of a nonincreasing residual on [lo, hi] (residual(lo) >= 0 >=
/// residual(hi)). Stops once |residual| <= f_tol or the bracket collapses.
inline double bisect_decreasing(const std::function<double(double)>& residual,
                                double lo, double hi, double f_tol,
                                int max_iter = 300) {
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double r = residual(mid);
    if (std::abs(r) <= f_tol) return mid;
    if (r > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

struct Minimum {
  double x;
  double value;
};

/// Golden-section search for a minimum of f on [lo, hi], stopping when the
/// bracket is narrower than width. The endpoints are candidates too, so a
/// monotone f returns the better endpoint.
inline Minimum golden_section(const std::function<double(double)>& f, double lo,
                              double hi, double width) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  Minimum best{lo, f(lo)};
  const double f_hi = f(hi);
  if (f_hi < best.value) best = {hi, f_hi};
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > width) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  if (fc < best.value || (fc == best.value && c < best.x)) best = {c, fc};
  if (fd < best.value) best = {d, fd};
  return best;
}

}  // namespace repremia::numeric

#include <doctest.h>

#include <cmath>
#include <limits>

#include "../support/oracles.hpp"
#include "repremia/piecewise.hpp"

using namespace repremia;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("ramps and evaluation") {
  const auto f = PiecewiseLinear::from_ramps(0.0, {{1.0, 1.0}, {1.5, -1.0}, {3.0, 1.0}});
  CHECK(f(0.5) == 0.0);
  CHECK(f(1.25) == doctest::Approx(0.25));
  CHECK(f(2.0) == doctest::Approx(0.5));
  CHECK(f(4.0) == doctest::Approx(1.5));
  CHECK(f.nondecreasing());
  CHECK(f.slope_at(2.0) == 0.0);
  CHECK(f.segment_end(f.segment_count() - 1) == kInf);
  CHECK(PiecewiseLinear::from_ramps(0.0, {{kInf, 1.0}})(100.0) == 0.0);
}

TEST_CASE("sup_level") {
  const auto f = PiecewiseLinear::from_ramps(0.0, {{1.0, 1.0}, {1.5, -1.0}, {3.0, 1.0}});
  CHECK(f.sup_level(0.5) == doctest::Approx(3.0));
  CHECK(f.sup_level(0.25) == doctest::Approx(1.25));
  CHECK(f.sup_level(2.0) == doctest::Approx(4.5));
  CHECK(PiecewiseLinear::constant(1.0).sup_level(2.0) == kInf);
  CHECK(PiecewiseLinear::constant(1.0).sup_level(0.5) == 0.0);
}

TEST_CASE("arithmetic and simplification") {
  const auto f = PiecewiseLinear::from_ramps(1.0, {{1.0, 0.5}, {2.0, 0.5}});
  const auto g = PiecewiseLinear::from_ramps(0.0, {{1.5, 1.0}});
  const auto h = f + g;
  const auto d = f - g;
  for (double x : {0.0, 0.7, 1.2, 1.7, 2.5, 10.0}) {
    CHECK(h(x) == doctest::Approx(f(x) + g(x)));
    CHECK(d(x) == doctest::Approx(f(x) - g(x)));
    CHECK(f.scaled(3.0)(x) == doctest::Approx(3.0 * f(x)));
    CHECK(f.shifted(-2.0)(x) == doctest::Approx(f(x) - 2.0));
  }
  const PiecewiseLinear split(0.0, {0.0, 1.0, 2.0}, {1.0, 1.0, 0.0});
  CHECK(split.simplified().segment_count() == 2);
  CHECK(max_abs_difference(f, f.shifted(0.25)) == doctest::Approx(0.25));
  CHECK(max_abs_difference(f, g) == doctest::Approx(1.25));
  CHECK(max_abs_difference(f, g.scaled(0.5)) == kInf);
}

TEST_CASE("expectation and stop-loss transform against quadrature") {
  const auto m = LossModel::exponential(2.0);
  const auto f = PiecewiseLinear::from_ramps(0.3, {{0.5, 1.0}, {1.0, -0.5}, {4.0, 0.5}});
  const auto density = [](double x) { return std::exp(-x / 2.0) / 2.0; };
  const double want = oracle::simpson_tail([&](double x) { return f(x) * density(x); }, 0.0);
  CHECK(f.expectation(m) == doctest::Approx(want).epsilon(1e-7));
  for (double t : {0.0, 0.5, 0.8, 2.0, 5.0}) {
    const double sl = oracle::simpson_tail(
        [&](double x) { return std::max(f(x) - t, 0.0) * density(x); }, 0.0);
    CHECK(f.stop_loss_transform(m, t) == doctest::Approx(sl).epsilon(1e-6));
  }
}

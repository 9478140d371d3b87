#include <doctest.h>

#include <cmath>
#include <numeric>

#include "../support/oracles.hpp"
#include "repremia/dist.hpp"
#include "repremia/errors.hpp"

using namespace repremia;

TEST_CASE("stop_loss examples") {
  const auto e = LossModel::exponential(2.0);
  CHECK(e.stop_loss(0.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.stop_loss(2.0 * std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-13));
  const auto p = LossModel::pareto(2.0, 2.0);
  CHECK(p.stop_loss(2.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(p.stop_loss(0.0) == doctest::Approx(p.mean()).epsilon(1e-14));
}

TEST_CASE("invert_stop_loss examples") {
  const auto e = LossModel::exponential(2.0);
  CHECK(e.invert_stop_loss(2.0) == 0.0);
  CHECK(e.invert_stop_loss(1.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(LossModel::pareto(2.0, 2.0).invert_stop_loss(1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(e.invert_stop_loss(0.0), DomainError);
  CHECK_THROWS_AS(e.invert_stop_loss(2.5), DomainError);
}

TEST_CASE("construction rejects bad parameters") {
  CHECK_THROWS_AS(LossModel::pareto(2.0, 1.0), DomainError);
  CHECK_THROWS_AS(LossModel::pareto(-1.0, 2.0), DomainError);
  CHECK_THROWS_AS(LossModel::exponential(0.0), DomainError);
  CHECK_THROWS_AS(LossModel::tabulated({{0.0, 1.0}, {1.0, 0.5}, {2.0, 0.5}}), DomainError);
  CHECK_THROWS_AS(LossModel::tabulated({{0.0, 0.9}, {1.0, 0.5}}), DomainError);
  CHECK_THROWS_AS(LossModel::tabulated({{0.0, 1.0}, {1.0, 1.2}}), DomainError);
}

TEST_CASE("sample") {
  const auto e = LossModel::exponential(2.0);
  CHECK_THROWS_AS(e.sample(0, 1), DomainError);
  const auto xs = e.sample(1000000, 1);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  CHECK(std::abs(mean - 2.0) <= 3.0 * 2.0 / std::sqrt(1e6));
  CHECK(xs == e.sample(1000000, 1));
  CHECK(xs != e.sample(1000000, 2));
}

TEST_CASE("survival and quantile round trip") {
  for (const auto& m : {LossModel::exponential(2.0), LossModel::pareto(2.0, 2.0),
                        LossModel::pareto(0.7, 3.5)}) {
    for (int i = 1; i <= 99; ++i) {
      const double p = i / 100.0;
      CHECK(m.survival(m.quantile(p)) == doctest::Approx(1.0 - p).epsilon(1e-9));
    }
  }
}

TEST_CASE("layer integrals match quadrature") {
  const auto e = LossModel::exponential(1.7);
  const auto p = LossModel::pareto(2.0, 2.0);
  for (double l : {0.0, 0.3, 2.0, 7.5}) {
    for (double w : {0.1, 1.0, 5.0}) {
      CHECK(e.layer_mean(l, l + w) ==
            doctest::Approx(oracle::simpson([](double x) { return oracle::exp_survival(1.7, x); }, l,
                                            l + w))
                .epsilon(1e-10));
      CHECK(p.layer_mean(l, l + w) ==
            doctest::Approx(oracle::simpson(
                                [](double x) { return oracle::pareto_survival(2.0, 2.0, x); }, l, l + w))
                .epsilon(1e-10));
    }
    CHECK(p.stop_loss(l) ==
          doctest::Approx(oracle::simpson_tail(
                              [](double x) { return oracle::pareto_survival(2.0, 2.0, x); }, l))
              .epsilon(1e-6));
  }
}

TEST_CASE("stop-loss convexity and layer additivity") {
  for (const auto& m : {LossModel::exponential(2.0), LossModel::pareto(2.0, 2.0),
                        LossModel::tabulated({{0.0, 1.0}, {1.0, 0.6}, {2.0, 0.3}, {5.0, 0.05}})}) {
    const double h = 0.05;
    for (int i = 1; i < 200; ++i) {
      const double x = i * h;
      CHECK(m.stop_loss(x + h) - 2.0 * m.stop_loss(x) + m.stop_loss(x - h) >= -1e-9);
      CHECK(m.layer_mean(x - h, x) + m.layer_mean(x, x + 3 * h) ==
            doctest::Approx(m.layer_mean(x - h, x + 3 * h)).epsilon(1e-9));
    }
  }
}

TEST_CASE("empirical stop-loss agrees with the analytic one") {
  const auto m = LossModel::pareto(2.0, 3.0);
  const auto xs = m.sample(1000000, 17);
  for (double d : {0.0, 0.5, 2.0}) {
    double s = 0.0;
    double s2 = 0.0;
    for (double x : xs) {
      const double v = std::max(x - d, 0.0);
      s += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(xs.size());
    const double mean = s / n;
    const double sd = std::sqrt(s2 / n - mean * mean);
    CHECK(std::abs(mean - m.stop_loss(d)) <= 4.0 * sd / std::sqrt(n));
  }
}

TEST_CASE("tabulated model") {
  const auto t = LossModel::tabulated({{0.0, 1.0}, {1.0, 0.5}, {3.0, 0.1}});
  CHECK(t.survival(0.5) == doctest::Approx(0.75));
  CHECK(t.survival(2.0) == doctest::Approx(0.3));
  // exponential tail through the last two points: rate ln(5)/2
  CHECK(t.survival(5.0) == doctest::Approx(0.1 * std::exp(-std::log(5.0))));
  CHECK(t.mean() == doctest::Approx(0.75 + 0.6 + 0.1 * 2.0 / std::log(5.0)));
  CHECK(t.quantile(0.25) == doctest::Approx(0.5));
  for (double a : {0.1, 0.5, 1.0, 1.4}) {
    CHECK(t.stop_loss(t.invert_stop_loss(a)) == doctest::Approx(a).epsilon(1e-10));
  }
  const auto bounded = LossModel::tabulated({{0.0, 1.0}, {2.0, 0.0}});
  CHECK(bounded.ess_sup() == 2.0);
  CHECK(bounded.mean() == doctest::Approx(1.0));
  CHECK(bounded.survival(3.0) == 0.0);
  CHECK(LossModel::exponential(1.0).ess_sup() == std::numeric_limits<double>::infinity());
}

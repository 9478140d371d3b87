#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "../support/oracles.hpp"
#include "repremia/errors.hpp"
#include "repremia/indemnity.hpp"

using namespace repremia;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// delta = 1, theta0 = 1, theta1 = 0.5, theta2 = 2: d_I = a / 2, u_I = 2a
PremiumParams base_params() { return PremiumParams::make(1.0, 1.0, 0.5, 2.0); }

}  // namespace

TEST_CASE("evaluate") {
  const auto sl = Indemnity::stop_loss(1.0);
  CHECK(sl(0.5) == 0.0);
  CHECK(sl(3.0) == 2.0);
  CHECK(sl.retained(3.0) == 1.0);
  const auto i1 = Indemnity::two_layer(Family::I1, {1.0, 0.5, 3.0});
  CHECK(i1(2.0) == doctest::Approx(0.5));
  CHECK(i1(4.0) == doctest::Approx(1.5));
  CHECK(Indemnity::stop_loss(kInf).is_zero());
}

TEST_CASE("feasibility is enforced") {
  CHECK_THROWS_AS(Indemnity::general({{0.0, 0.0}, {1.0, 1.5}}), DomainError);
  CHECK_THROWS_AS(Indemnity::general({{0.0, 0.5}, {1.0, -0.1}}), DomainError);
  CHECK_THROWS_AS(Indemnity::two_layer(Family::I1, {1.0, 2.0, 2.5}), InfeasibleError);
  CHECK_THROWS_AS(Indemnity::three_layer({1.0, 2.0, 1.5, 3.0, 4.0}), InfeasibleError);
  const auto g = Indemnity::general({{0.0, 0.0}, {1.0, 0.5}, {2.0, 1.0}});
  for (int i = 0; i <= 100; ++i) {
    const double x = 0.05 * i;
    CHECK(g(x) >= 0.0);
    CHECK(g(x) <= x);
  }
}

TEST_CASE("ceded_mean") {
  const auto m = LossModel::exponential(2.0);
  CHECK(ceded_mean(Indemnity::zero(), m) == 0.0);
  CHECK(ceded_mean(Indemnity::full(), m) == doctest::Approx(2.0));
  CHECK(ceded_mean(Indemnity::stop_loss(2.0 * std::log(2.0)), m) == doctest::Approx(1.0));
  const auto s3 = Indemnity::three_layer({0.5, 1.0, 2.0, 3.0, 6.0});
  const double want = oracle::simpson([](double x) { return std::exp(-x / 2.0); }, 0.5, 1.0) +
                      oracle::simpson([](double x) { return std::exp(-x / 2.0); }, 2.0, 3.0) +
                      2.0 * std::exp(-3.0);
  CHECK(ceded_mean(s3, m) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("complete_I1") {
  const auto m = LossModel::exponential(2.0);
  const auto p = base_params();
  SUBCASE("interior d1 against a bisection oracle") {
    const auto I = complete_I1(m, p, 1.0, 0.5);
    const auto& l = std::get<TwoLayerLayout>(I.layout());
    CHECK(l.width == doctest::Approx(0.5));
    const double first = 2.0 * (std::exp(-0.25) - std::exp(-0.5));
    const double d2 = oracle::bisect(
        [&](double d) { return first + 2.0 * std::exp(-d / 2.0) - 1.0; }, 1.0, 50.0);
    REQUIRE(l.d2.has_value());
    CHECK(*l.d2 == doctest::Approx(d2).epsilon(1e-10));
    CHECK(ceded_mean(I, m) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("d1 at the stop-loss deductible merges the layers") {
    const double dt = 2.0 * std::log(2.0);
    const auto I = complete_I1(m, p, 1.0, dt);
    for (double x : {0.5, 1.5, 2.0, 5.0, 12.0}) CHECK(I(x) == doctest::Approx(std::max(x - dt, 0.0)));
    CHECK(conforms_to(I, Family::I1, p, m));
  }
  SUBCASE("full mean at d1 = 0 is full cession") {
    const auto I = complete_I1(m, p, 2.0, 0.0);
    for (double x : {0.5, 3.0, 9.0}) CHECK(I(x) == doctest::Approx(x));
  }
  SUBCASE("d1 beyond the stop-loss deductible is infeasible") {
    CHECK_THROWS_AS(complete_I1(m, p, 1.0, 1.5), InfeasibleError);
  }
}

TEST_CASE("complete_I2") {
  const auto m = LossModel::exponential(2.0);
  const auto p = base_params();
  SUBCASE("first layer alone exceeds the mean") {
    // [0.2, 2.2] carries 2(e^-0.1 - e^-1.1) = 1.144 > a = 1
    CHECK_THROWS_AS(complete_I2(m, p, 1.0, 0.2), InfeasibleError);
    CHECK(i2_lower_bound(m, p, 1.0) > 0.2);
  }
  SUBCASE("interior d1 against a bisection oracle") {
    const auto I = complete_I2(m, p, 1.0, 1.0);
    const auto& l = std::get<TwoLayerLayout>(I.layout());
    CHECK(l.width == doctest::Approx(2.0));
    const double first = 2.0 * (std::exp(-0.5) - std::exp(-1.5));
    const double d2 = oracle::bisect(
        [&](double d) { return first + 2.0 * std::exp(-d / 2.0) - 1.0; }, 3.0, 50.0);
    CHECK(*l.d2 == doctest::Approx(d2).epsilon(1e-10));
  }
  SUBCASE("lower bound exhausts the mean with the first layer") {
    const double lb = i2_lower_bound(m, p, 1.0);
    const double want = oracle::bisect(
        [](double d) { return 2.0 * (std::exp(-d / 2.0) - std::exp(-(d + 2.0) / 2.0)) - 1.0; }, 0.0,
        1.3);
    CHECK(lb == doctest::Approx(want).epsilon(1e-9));
    const auto I = complete_I2(m, p, 1.0, lb);
    CHECK(ceded_mean(I, m) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("layers merge into a stop-loss at the deductible") {
    const double dt = 2.0 * std::log(2.0);
    const auto I = complete_I2(m, p, 1.0, dt);
    for (double x : {0.5, 2.0, 5.0, 12.0}) CHECK(I(x) == doctest::Approx(std::max(x - dt, 0.0)));
  }
  SUBCASE("full mean at d1 = 0 is full cession") {
    const auto I = complete_I2(m, p, 2.0, 0.0);
    for (double x : {0.5, 3.0, 9.0}) CHECK(I(x) == doctest::Approx(x));
  }
}

TEST_CASE("completion round trip") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto p = PremiumParams::make(0.7, 1.0, 0.4, 2.5);
  for (const auto& m : {LossModel::exponential(2.0), LossModel::pareto(2.0, 2.0),
                        LossModel::pareto(1.0, 3.0)}) {
    for (int i = 0; i < 200; ++i) {
      const double a = m.mean() * (0.01 + 0.98 * u(rng));
      const double dt = m.invert_stop_loss(a);
      const auto I1 = complete_I1(m, p, a, dt * u(rng));
      CHECK(ceded_mean(I1, m) == doctest::Approx(a).epsilon(1e-8));
      CHECK(conforms_to(I1, Family::I1, p, m));
      const double lb = i2_lower_bound(m, p, a);
      const auto I2 = complete_I2(m, p, a, lb + (dt - lb) * u(rng));
      CHECK(ceded_mean(I2, m) == doctest::Approx(a).epsilon(1e-8));
      CHECK(conforms_to(I2, Family::I2, p, m));
    }
  }
}

TEST_CASE("thresholds") {
  const auto m = LossModel::exponential(2.0);
  const auto p = base_params();
  const auto z = thresholds(Indemnity::zero(), p, m);
  CHECK(z.x_d == kInf);
  CHECK(z.x_u == kInf);
  SchemeThresholds t = scheme_thresholds(p, 1.0);  // d_I = 0.5, u_I = 2
  const auto sl = thresholds(Indemnity::stop_loss(1.0), t);
  CHECK(sl.x_d == doctest::Approx(1.5));
  CHECK(sl.x_u == doctest::Approx(3.0));
  // x_d is the supremum of the flat stretch at level d_I, i.e. d2
  const auto i1 = thresholds(Indemnity::two_layer(Family::I1, {0.7, 0.5, 2.4}), t);
  CHECK(i1.x_d == doctest::Approx(2.4));
  CHECK(i1.x_u == doctest::Approx(2.4 + 1.5));
}

TEST_CASE("family nesting") {
  const auto m = LossModel::pareto(2.0, 2.0);
  const auto p = base_params();
  const auto sl = Indemnity::stop_loss(2.0);
  CHECK(conforms_to(sl, Family::I1, p, m));
  CHECK(conforms_to(sl, Family::I2, p, m));
  CHECK(conforms_to(sl, Family::S3, p, m));
  CHECK(to_string(family_from_string("I2")) == "I2");
  CHECK_THROWS_AS(family_from_string("I9"), DomainError);
}

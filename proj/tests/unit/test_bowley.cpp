#include <doctest.h>

#include <cmath>

#include "repremia/bowley.hpp"
#include "repremia/premium.hpp"

using namespace repremia;

namespace {

BowleyConfig coarse_config() {
  BowleyConfig cfg;
  cfg.loss = LossModel::pareto(2.0, 2.0);
  cfg.deltas = delta_grid(0.0, 1.0, 0.05);
  cfg.solver.outer_grid = 100;
  return cfg;
}

}  // namespace

TEST_CASE("theta1 rule") {
  CHECK(theta1_rule(0.0, 1.0, 0.5) == 1.0);
  CHECK(theta1_rule(0.3, 1.0, 0.5) == doctest::Approx(0.7));
  CHECK(theta1_rule(0.8, 1.0, 0.5) == 0.5);
  CHECK(bowley_params(0.0, 1.0, 0.5, 2.0).constant_premium());
}

TEST_CASE("delta grid") {
  const auto g = delta_grid(0.0, 1.0, 0.001);
  CHECK(g.size() == 1001);
  CHECK(g[259] == 0.259);
  CHECK(g.back() == 1.0);
  CHECK(delta_grid(0.2, 0.2, 0.1).size() == 1);
}

TEST_CASE("reinsurer value") {
  const auto m = LossModel::exponential(2.0);
  const auto p = bowley_params(0.6, 1.0, 0.5, 2.0);
  CHECK(reinsurer_value(m, p, Distortion::tvar(0.05), Indemnity::zero()) == 0.0);
  // risk-neutral reinsurer: E[N] = E[I] - E[Pi] <= -theta1 a
  const auto I = Indemnity::stop_loss(1.0);
  const double a = ceded_mean(I, m);
  const double en = reinsurer_value(m, p, Distortion::tvar(1.0), I);
  const auto t = bind_thresholds(p, I, m);
  CHECK(en == doctest::Approx(a - expected_premium(p, t, I, m)).epsilon(1e-12));
  CHECK(en <= -p.theta1() * a + 1e-12);
}

TEST_CASE("sweep") {
  auto cfg = coarse_config();
  const auto rep = sweep(cfg);
  REQUIRE(rep.rows.size() == 21);
  const double star = rep.rows[rep.star_index].reinsurer_value;
  for (const auto& r : rep.rows) CHECK(star <= r.reinsurer_value + rep.eps_val);
  CHECK(rep.delta_star == rep.rows[rep.star_index].delta);
  CHECK(rep.delta_star == rep.delta_min);
  for (std::size_t i = 0; i < rep.star_index; ++i) {
    CHECK(rep.rows[i].reinsurer_value > star + rep.eps_val);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].insurer_value >= rep.rows[i - 1].insurer_value - 1e-9);
  }

  // the delta = 0 row is the constant-premium solution
  const auto c = PremiumParams::make(0.0, 1.0, 1.0, 2.0);
  const auto direct = solve_insurer(cfg.loss, c, cfg.insurer, cfg.solver);
  CHECK(rep.rows[0].insurer_value == direct.value);
  CHECK(max_abs_difference(rep.rows[0].contract.function(), direct.contract.function()) == 0.0);

  // re-solving at delta* reproduces the contract exactly
  const auto again = solve_insurer(cfg.loss, bowley_params(rep.delta_star, 1.0, 0.5, 2.0),
                                   cfg.insurer, cfg.solver);
  CHECK(again.value == rep.rows[rep.star_index].insurer_value);
  CHECK(max_abs_difference(again.contract.function(), rep.contract_star.function()) == 0.0);

  cfg.threads = 4;
  const auto par = sweep(cfg);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(par.rows[i].reinsurer_value == rep.rows[i].reinsurer_value);
  }
}

TEST_CASE("beta curve") {
  auto cfg = coarse_config();
  const auto curve = beta_curve(cfg, {0.05, 0.3, 0.3, 1.0});
  REQUIRE(curve.size() == 4);
  CHECK(curve[1].delta_star == curve[2].delta_star);
  CHECK(curve[1].reinsurer_value == curve[2].reinsurer_value);
  CHECK(curve[3].delta_star == 0.0);
  const auto direct = sweep(cfg);
  CHECK(curve[0].delta_star == direct.delta_star);
}

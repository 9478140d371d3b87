#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "repremia/errors.hpp"
#include "scenario.hpp"

using namespace repremia;
using namespace repremia::cli;

namespace {

json minimal() {
  return json::parse(R"({
    "schema": 1,
    "loss": {"kind": "pareto", "eta": 2.0, "zeta": 2.0},
    "premium": {"theta0": 1.0, "theta1_bar": 0.5, "theta2": 2.0},
    "insurer": {"kind": "tvar", "alpha": 0.1}
  })");
}

std::string config_error(const json& j) {
  try {
    parse_scenario(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("grids") {
  const auto g = parse_grid("0:1:0.25");
  CHECK(expand(g) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK_THROWS_AS(parse_grid("0:1"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:0:0.1"), ConfigError);
  CHECK_THROWS_AS(parse_grid("a:b:c"), ConfigError);
}

TEST_CASE("formatting") {
  CHECK(fmt(0.1 + 0.2) == "0.3");
  CHECK(fmt(1.0 / 3.0) == "0.333333333333");
  CHECK(fmt(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(fmt(-0.0) == "0");
  CHECK(fmt(std::optional<double>{}) == "inf");
}

TEST_CASE("valid scenario") {
  auto j = minimal();
  j["reinsurer"] = {{"kind", "power"}, {"beta", 0.3}};
  j["premium"]["delta_grid"] = "0:1:0.5";
  const auto s = parse_scenario(j);
  CHECK(s.deltas() == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(s.params(0.2).theta1() == doctest::Approx(0.8));
  const auto cfg = s.bowley(2);
  CHECK(cfg.reinsurer.kind() == DistortionKind::Power);
  CHECK(cfg.threads == 2);
  const auto r = resolved(s);
  CHECK(r["schema"] == 1);
  CHECK(parse_scenario(r).deltas() == s.deltas());
}

TEST_CASE("strict schema") {
  auto j = minimal();
  j["premium"]["thetaX"] = 1.0;
  CHECK(config_error(j).find("premium.thetaX") != std::string::npos);
  j = minimal();
  j["extra"] = 1;
  CHECK(config_error(j).find("extra") != std::string::npos);
  j = minimal();
  j["schema"] = 2;
  CHECK(config_error(j).find("schema") != std::string::npos);
  j = minimal();
  j["loss"]["zeta"] = 0.5;
  CHECK(config_error(j).find("loss") != std::string::npos);
  j = minimal();
  j["insurer"] = {{"kind", "tvar"}, {"beta", 0.1}};
  CHECK(config_error(j).find("insurer") != std::string::npos);
  j = minimal();
  j["premium"]["theta2"] = 0.5;
  CHECK_FALSE(config_error(j).empty());
  j = minimal();
  j["premium"].erase("theta1_bar");
  CHECK(config_error(j).find("theta1") != std::string::npos);
  j = minimal();
  j["premium"]["theta1"] = 0.5;
  j["premium"]["delta"] = 0.2;
  CHECK(config_error(j).find("premium") != std::string::npos);
  j = minimal();
  j["solver"] = {{"inner_grid", 10}};
  CHECK(config_error(j).find("solver.inner_grid") != std::string::npos);
}

TEST_CASE("indemnity serialization") {
  const auto m = LossModel::exponential(2.0);
  const auto p = PremiumParams::make(1.0, 1.0, 0.5, 2.0);
  const auto j = to_json(Indemnity::two_layer(Family::I1, {0.5, 0.5, std::nullopt}), &p, &m);
  CHECK(j["family"] == "I1");
  CHECK(j["d2"].is_null());
  CHECK(j["dI"] == 0.5);
  CHECK(to_json(Indemnity::stop_loss(1.0))["d"] == 1.0);
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "repremia/bowley.hpp"
#include "repremia/dist.hpp"
#include "repremia/indemnity.hpp"
#include "repremia/insurer_solver.hpp"
#include "repremia/riskmeasure.hpp"

namespace repremia::cli {

using nlohmann::json;

struct GridSpec {
  double start = 0.0;
  double end = 0.0;
  double step = 0.0;
};

/// "start:end:step"
GridSpec parse_grid(const std::string& text);
std::vector<double> expand(const GridSpec& g);

struct Scenario {
  LossModel loss = LossModel::exponential(1.0);
  double theta0 = 0.0;
  std::optional<double> theta1;
  std::optional<double> theta1_bar;
  double theta2 = 0.0;
  std::optional<double> delta;
  std::optional<GridSpec> delta_grid;
  std::optional<double> ceded_mean;  // premium evaluation only
  Distortion insurer = Distortion::tvar(0.1);
  std::optional<Distortion> reinsurer;
  SolverSettings solver;
  double eps_val = -1.0;
  std::uint64_t seed = 1;
  std::vector<double> beta_grid;
  std::vector<double> y_grid;
  std::size_t mc_samples = 1000000;
  int verify_cases = 100;
  std::string output_dir;

  /// Premium parameters at delta: theta1 if given, else the theta1 rule.
  PremiumParams params(double delta) const;
  double floor_loading() const;
  /// Explicit delta list, else the single delta; throws ConfigError if none.
  std::vector<double> deltas() const;
  BowleyConfig bowley(unsigned threads) const;
};

LossModel loss_from_json(const json& j);
json to_json(const LossModel& m);
Distortion distortion_from_json(const json& j, const std::string& where);
json to_json(const Distortion& d);
json to_json(const Indemnity& I, const PremiumParams* p = nullptr,
             const LossModel* m = nullptr);

/// Strict parse: unknown keys, missing keys and invalid values raise
/// ConfigError naming the key path.
Scenario parse_scenario(const json& j);
Scenario load_scenario(const std::string& path);

/// Fully resolved configuration, echoed into every output file.
json resolved(const Scenario& s);

/// %.12g; infinities as "inf", empty optionals as "inf" in CSV.
std::string fmt(double v);
std::string fmt(const std::optional<double>& v);

}  // namespace repremia::cli

// Batch front end: scenario files in, CSV/JSON tables out.
//
//   repremia premium    --scenario s.json --out dir
//   repremia solve      --scenario s.json --out dir [--delta 0.5 | --delta-grid 0:1:0.1]
//   repremia bowley     --scenario s.json --out dir --threads 4
//   repremia sweep      --scenario s.json --out dir
//   repremia beta-curve --scenario s.json --out dir
//   repremia verify     --scenario s.json --out dir --seed 7
//
// Exit codes: 0 success, 2 configuration error, 3 success with solver
// warnings, 4 numerical failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "repremia/bowley.hpp"
#include "repremia/errors.hpp"
#include "repremia/insurer_solver.hpp"
#include "repremia/oracle.hpp"
#include "repremia/premium.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using namespace repremia;
using namespace repremia::cli;

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kWarnings = 3;
constexpr int kNumeric = 4;

enum class Level { Quiet, Warn, Info, Debug };

Level log_level() {
  const char* env = std::getenv("REPREMIA_LOG");
  if (!env) return Level::Warn;
  const std::string v = env;
  if (v == "quiet" || v == "0") return Level::Quiet;
  if (v == "info" || v == "2") return Level::Info;
  if (v == "debug" || v == "3") return Level::Debug;
  return Level::Warn;
}

void log(Level at, const std::string& msg) {
  static const Level level = log_level();
  if (static_cast<int>(at) > static_cast<int>(level)) return;
  const char* tag = at == Level::Warn ? "warning" : at == Level::Info ? "info" : "debug";
  std::cerr << "repremia: " << tag << ": " << msg << "\n";
}

struct Options {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::optional<double> delta;
  std::string delta_grid;
  std::string format = "csv";
};

class Output {
 public:
  Output(std::string dir, json config) : dir_(std::move(dir)), config_(std::move(config)) {
    fs::create_directories(dir_);
  }

  void csv(const std::string& name, const std::string& header,
           const std::vector<std::vector<std::string>>& rows) const {
    std::ostringstream s;
    s << "# config: " << config_.dump() << "\n" << header << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << r[i];
      s << "\n";
    }
    write(name, s.str());
  }

  void json_file(const std::string& name, json body) const {
    body["config"] = config_;
    write(name, body.dump(2) + "\n");
  }

  void write(const std::string& name, const std::string& text) const {
    const auto path = fs::path(dir_) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << text;
    log(Level::Info, "wrote " + path.string());
  }

 private:
  std::string dir_;
  json config_;
};

int cmd_premium(const Scenario& s, const Output& out, const Options& o) {
  if (!s.delta) throw ConfigError("premium: 'premium.delta' (or --delta) is required");
  if (!s.ceded_mean) throw ConfigError("premium: 'premium.a' (the ceded mean) is required");
  const auto p = s.params(*s.delta);
  const auto t = scheme_thresholds(p, *s.ceded_mean);
  std::vector<std::vector<std::string>> rows;
  json j = json::array();
  for (double y : s.y_grid) {
    if (y < 0.0) throw ConfigError("y_grid: values must be >= 0");
    const double v = realized_premium(p, t, y);
    const std::string b(to_string(premium_branch(p, t, y)));
    rows.push_back({fmt(y), fmt(v), b});
    j.push_back({{"y", y}, {"premium", v}, {"branch", b}});
  }
  if (o.format == "json") {
    out.json_file("premium.json", {{"rows", j}});
  } else {
    out.csv("premium.csv", "y,premium,branch", rows);
  }
  return kOk;
}

json solve_json(const LossModel& m, const PremiumParams& p, const SolveReport& r,
                double delta) {
  json j{{"delta", delta},
         {"theta1", p.theta1()},
         {"a_star", r.a_star},
         {"insurer_value", r.value},
         {"branch", std::string(to_string(r.inner.branch))},
         {"method", r.inner.method},
         {"h_residual", r.inner.h_residual},
         {"ratio_verified", r.inner.ratio_verified},
         {"contract", to_json(r.contract, &p, &m)},
         {"warnings", r.warnings}};
  return j;
}

int cmd_solve(const Scenario& s, const Output& out, const Options& o) {
  const auto deltas = s.deltas();
  SolverSettings settings = s.solver;
  settings.threads = o.threads;
  json results = json::array();
  bool warned = false;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const auto p = s.params(deltas[k]);
    log(Level::Debug, "solving delta = " + fmt(deltas[k]));
    const auto r = solve_insurer(s.loss, p, s.insurer, settings);
    for (const auto& w : r.warnings) log(Level::Warn, "delta " + fmt(deltas[k]) + ": " + w);
    warned = warned || !r.warnings.empty();
    auto j = solve_json(s.loss, p, r, deltas[k]);
    std::vector<std::vector<std::string>> rows;
    json trace = json::array();
    for (const auto& tp : r.trace) {
      rows.push_back({fmt(tp.a), fmt(tp.d1), fmt(tp.d2), fmt(tp.value),
                      std::string(to_string(tp.branch))});
      trace.push_back({tp.a, tp.d1, tp.d2 ? json(*tp.d2) : json(nullptr), tp.value,
                       std::string(to_string(tp.branch))});
    }
    const std::string name = deltas.size() == 1 ? "trace" : "trace_" + std::to_string(k);
    if (o.format == "json") {
      j["trace"] = trace;
    } else {
      out.csv(name + ".csv", "a,d1,d2,value,branch", rows);
      j["trace_file"] = name + ".csv";
    }
    results.push_back(j);
  }
  out.json_file("solve.json", {{"results", results}});
  return warned ? kWarnings : kOk;
}

std::vector<std::vector<std::string>> bowley_rows(const BowleyReport& rep) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : rep.rows) {
    rows.push_back({fmt(r.delta), fmt(r.theta1), fmt(r.d1), fmt(r.d_I), fmt(r.d2), fmt(r.a),
                    fmt(r.insurer_value), fmt(r.reinsurer_value),
                    std::string(to_string(r.branch))});
  }
  return rows;
}

json bowley_rows_json(const BowleyReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"delta", r.delta},
                    {"theta1", r.theta1},
                    {"d1", r.d1},
                    {"dI", r.d_I},
                    {"d2", r.d2 ? json(*r.d2) : json(nullptr)},
                    {"a", r.a},
                    {"insurer_value", r.insurer_value},
                    {"reinsurer_value", r.reinsurer_value},
                    {"branch", std::string(to_string(r.branch))},
                    {"warnings", r.warnings}});
  }
  return rows;
}

bool any_warning(const BowleyReport& rep) {
  return std::any_of(rep.rows.begin(), rep.rows.end(),
                     [](const BowleyRow& r) { return !r.warnings.empty(); });
}

constexpr const char* kBowleyHeader =
    "delta,theta1,d1,dI,d2,a,insurer_value,reinsurer_value,branch";

int cmd_sweep(const Scenario& s, const Output& out, const Options& o, bool summary) {
  const auto cfg = s.bowley(o.threads);
  const auto rep = sweep(cfg);
  const std::string base = summary ? "bowley" : "sweep";
  if (o.format == "json") {
    out.json_file(base + "_rows.json", {{"rows", bowley_rows_json(rep)}});
  } else {
    out.csv(base + ".csv", kBowleyHeader, bowley_rows(rep));
  }
  if (summary) {
    const auto p = bowley_params(rep.delta_star, cfg.theta0, cfg.theta1_bar, cfg.theta2);
    const auto& star = rep.rows[rep.star_index];
    out.json_file("bowley.json",
                  {{"delta_star", rep.delta_star},
                   {"optimal_set", {rep.delta_min, rep.delta_max}},
                   {"optimal_count", rep.optimal_count},
                   {"eps_val", rep.eps_val},
                   {"reinsurer_value", star.reinsurer_value},
                   {"insurer_value", star.insurer_value},
                   {"contract", to_json(rep.contract_star, &p, &cfg.loss)}});
    std::cout << "delta* = " << fmt(rep.delta_star) << " (optimal set [" << fmt(rep.delta_min)
              << ", " << fmt(rep.delta_max) << "])\n";
  }
  for (const auto& r : rep.rows) {
    for (const auto& w : r.warnings) log(Level::Warn, "delta " + fmt(r.delta) + ": " + w);
  }
  return any_warning(rep) ? kWarnings : kOk;
}

int cmd_beta_curve(const Scenario& s, const Output& out, const Options& o) {
  if (s.beta_grid.empty()) throw ConfigError("beta-curve: 'beta_grid' is required");
  const auto cfg = s.bowley(o.threads);
  std::vector<Distortion> levels;
  for (double b : s.beta_grid) {
    try {
      levels.push_back(cfg.reinsurer.with_level(b));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("beta_grid: ") + e.what());
    }
  }
  const auto curve = beta_curve(cfg, s.beta_grid);
  std::vector<std::vector<std::string>> rows;
  json j = json::array();
  for (const auto& c : curve) {
    rows.push_back({fmt(c.beta), fmt(c.delta_star), fmt(c.delta_min), fmt(c.delta_max),
                    fmt(c.reinsurer_value)});
    j.push_back({{"beta", c.beta},
                 {"delta_star", c.delta_star},
                 {"delta_min", c.delta_min},
                 {"delta_max", c.delta_max},
                 {"reinsurer_value", c.reinsurer_value}});
  }
  if (o.format == "json") {
    out.json_file("beta_curve.json", {{"rows", j}});
  } else {
    out.csv("beta_curve.csv", "beta,delta_star,delta_min,delta_max,reinsurer_value", rows);
  }
  return kOk;
}

struct Check {
  std::string name;
  int index;
  double margin;  // >= 0 passes
  double tolerance;
  std::string detail;
};

int cmd_verify(const Scenario& s, const Output& out, const Options& o) {
  if (!s.delta) throw ConfigError("verify: 'premium.delta' (or --delta) is required");
  if (!s.insurer.concave()) throw ConfigError("verify: insurer distortion must be concave");
  const auto& m = s.loss;
  const auto p = s.params(*s.delta);
  const auto& g = s.insurer;
  std::vector<Check> checks;
  const std::size_t mc_cases = 3;

  // Monte Carlo against the closed forms
  {
    const auto id = PiecewiseLinear::from_ramps(0.0, {{0.0, 1.0}});
    const auto e = mc_rho(g, id, m, s.mc_samples, case_seed(s.seed, 0));
    const double exact = rho_loss(g, m);
    const double band = 4.0 * e.std_error + 1e-9 * std::max(1.0, std::abs(exact));
    checks.push_back({"mc_rho_loss", 0, band - std::abs(e.value - exact), band,
                      "estimate " + fmt(e.value) + " exact " + fmt(exact)});
  }
  for (int i = 0; i < s.verify_cases; ++i) {
    std::mt19937_64 rng(case_seed(s.seed, 1000 + i));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = m.mean() * (0.05 + 0.9 * u(rng));
    const double dt = m.invert_stop_loss(a);
    const auto I = complete_I1(m, p, a, dt * u(rng));
    const auto& l = std::get<TwoLayerLayout>(I.layout());
    const auto pos = insurer_position(p, scheme_thresholds(p, a), I);
    const double closed = rho_T_I1_closed(g, m, p, a, l.d1, l.d2);
    const double generic = rho_monotone_transform(g, m, pos);
    const double tol = 1e-8 * std::max(1.0, std::abs(closed));
    checks.push_back({"closed_vs_generic", i, tol - std::abs(closed - generic), tol, ""});
    if (static_cast<std::size_t>(i) < mc_cases) {
      const auto e = mc_rho(g, pos, m, s.mc_samples, case_seed(s.seed, 2000 + i));
      // the floor covers rounding when T is constant on the tail (zero spread)
      const double band = 4.0 * e.std_error + 1e-9 * std::max(1.0, std::abs(closed));
      checks.push_back({"mc_vs_closed", i, band - std::abs(e.value - closed), band,
                        "estimate " + fmt(e.value) + " closed " + fmt(closed)});
    }
  }

  // improvement chain on random indemnities
  for (int i = 0; i < s.verify_cases; ++i) {
    std::mt19937_64 rng(case_seed(s.seed, 3000 + i));
    const auto I = random_indemnity(rng, m, 8, i % 2 == 1);
    const double tol = 1e-7 * m.mean();
    try {
      const auto f3 = improve_to_S3(I, m, p);
      const auto h = improve_to_two_layer(f3.contract, m, p);
      const double worst = std::max({f3.certificate.max_violation, f3.certificate.mean_gap,
                                     h.certificate.max_violation, h.certificate.mean_gap});
      checks.push_back({"convex_order_chain", i, tol - worst, tol, ""});
      auto rho_T = [&](const Indemnity& J) {
        return rho_monotone_transform(g, m, insurer_position(p, bind_thresholds(p, J, m), J));
      };
      const double r0 = rho_T(I);
      const double r1 = rho_T(f3.contract);
      const double r2 = rho_T(h.contract);
      const double slack = 1e-8 * std::max(1.0, std::abs(r0));
      checks.push_back({"rho_chain", i, std::min(r0 - r1, r1 - r2) + slack, slack,
                        fmt(r0) + " >= " + fmt(r1) + " >= " + fmt(r2)});
    } catch (const ConstructionError& e) {
      checks.push_back({"convex_order_chain", i, -1.0, tol, e.what()});
    }
  }

  // solver against brute force
  {
    const auto rep = solve_insurer(m, p, g, s.solver);
    const auto bf = brute_force_insurer(m, p, g, {});
    const double rel = std::abs(rep.value - bf.value) / std::max(1.0, std::abs(bf.value));
    checks.push_back({"solver_vs_brute_force", 0, 1e-4 - rel, 1e-4,
                      "solver " + fmt(rep.value) + " brute force " + fmt(bf.value)});
  }

  // the I2 family never beats I1
  for (int k = 1; k <= 10; ++k) {
    const double a = m.mean() * k / 11.0;
    const auto d = verify_I2_dominated(m, p, g, a, 200);
    checks.push_back({"I2_dominated", k, d.margin + 1e-8, 1e-8, ""});
  }

  std::vector<std::vector<std::string>> rows;
  int failures = 0;
  std::ostringstream xml;
  for (const auto& c : checks) {
    const bool pass = c.margin >= 0.0;
    failures += pass ? 0 : 1;
    rows.push_back({c.name, std::to_string(c.index), fmt(c.margin), fmt(c.tolerance),
                    pass ? "pass" : "fail"});
    xml << "  <testcase classname=\"" << c.name << "\" name=\"" << c.name << "_" << c.index
        << "\"";
    if (pass) {
      xml << "/>\n";
    } else {
      xml << "><failure message=\"margin " << fmt(c.margin) << " " << c.detail
          << "\"/></testcase>\n";
    }
  }
  out.csv("verify.csv", "check,case,margin,tolerance,result", rows);
  out.write("junit.xml", "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<testsuite name=\"repremia-verify\" tests=\"" +
                             std::to_string(checks.size()) + "\" failures=\"" +
                             std::to_string(failures) + "\">\n" + xml.str() +
                             "</testsuite>\n");
  std::cout << checks.size() - static_cast<std::size_t>(failures) << "/" << checks.size()
            << " verification checks passed\n";
  return failures == 0 ? kOk : kNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal reinsurance under a reward-and-penalty premium scheme"};
  app.require_subcommand(1);
  Options o;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"premium", "Evaluate the realized premium over y_grid"},
      {"solve", "Solve the insurer's optimal contract"},
      {"bowley", "Bowley sweep over delta with summary"},
      {"sweep", "Per-delta insurer and reinsurer table"},
      {"beta-curve", "delta* against the reinsurer level"},
      {"verify", "Run the oracle suite"},
  };
  for (const auto& s : subs) {
    auto* c = app.add_subcommand(s.name, s.help);
    c->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
    c->add_option("--out", o.out, "Output directory");
    c->add_option("--seed", o.seed, "Random seed (overrides the scenario)");
    c->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    c->add_option("--delta", o.delta, "Scheme parameter delta");
    c->add_option("--delta-grid", o.delta_grid, "delta grid start:end:step");
    c->add_option("--format", o.format, "Tabular output format")
        ->check(CLI::IsMember({"csv", "json"}));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    Scenario s = load_scenario(o.scenario);
    if (o.seed) s.seed = *o.seed;
    if (o.delta) {
      s.delta = *o.delta;
      s.delta_grid.reset();
      s.params(*s.delta);
    }
    if (!o.delta_grid.empty()) s.delta_grid = parse_grid(o.delta_grid);
    std::string dir = o.out.empty() ? s.output_dir : o.out;
    if (dir.empty()) dir = ".";
    const Output out(dir, resolved(s));
    if (cmd == "premium") return cmd_premium(s, out, o);
    if (cmd == "solve") return cmd_solve(s, out, o);
    if (cmd == "bowley") return cmd_sweep(s, out, o, true);
    if (cmd == "sweep") return cmd_sweep(s, out, o, false);
    if (cmd == "beta-curve") return cmd_beta_curve(s, out, o);
    return cmd_verify(s, out, o);
  } catch (const ConfigError& e) {
    std::cerr << "repremia: config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "repremia: config error: " << e.what() << "\n";
    return kConfig;
  } catch (const UnsupportedError& e) {
    std::cerr << "repremia: config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "repremia: numerical failure: " << e.what() << "\n";
    return kNumeric;
  }
}

#include "scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "repremia/errors.hpp"

namespace repremia::cli {

namespace {

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) {
      throw ConfigError("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
    }
  }
}

double number(const json& j, const std::string& key, const std::string& where) {
  const std::string path = where.empty() ? key : where + "." + key;
  if (!j.contains(key)) throw ConfigError("missing key '" + path + "'");
  if (!j.at(key).is_number()) throw ConfigError("key '" + path + "' must be a number");
  return j.at(key).get<double>();
}

std::optional<double> opt_number(const json& j, const std::string& key,
                                 const std::string& where) {
  if (!j.contains(key)) return std::nullopt;
  return number(j, key, where);
}

// Re-raise validation failures from the library with the key path attached.
template <class F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

GridSpec grid_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return guarded(where, [&] { return parse_grid(j.get<std::string>()); });
  check_keys(j, where, {"start", "end", "step"});
  return {number(j, "start", where), number(j, "end", where), number(j, "step", where)};
}

std::vector<double> list_or_grid(const json& j, const std::string& where) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(where + ": entries must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  return guarded(where, [&] { return expand(grid_from_json(j, where)); });
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(text);
  if (!(in >> g.start >> c1 >> g.end >> c2 >> g.step) || c1 != ':' || c2 != ':' ||
      !(in >> std::ws).eof()) {
    throw ConfigError("grid '" + text + "' is not start:end:step");
  }
  if (!std::isfinite(g.start) || !std::isfinite(g.end) || !(g.step > 0.0) ||
      !std::isfinite(g.step) || g.end < g.start) {
    throw ConfigError("grid '" + text + "': need finite values, step > 0 and end >= start");
  }
  return g;
}

std::vector<double> expand(const GridSpec& g) {
  try {
    return delta_grid(g.start, g.end, g.step);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

LossModel loss_from_json(const json& j) {
  const std::string w = "loss";
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("loss.kind must be one of pareto, exponential, tabulated");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "pareto") {
    check_keys(j, w, {"kind", "eta", "zeta"});
    return guarded(w, [&] { return LossModel::pareto(number(j, "eta", w), number(j, "zeta", w)); });
  }
  if (kind == "exponential") {
    check_keys(j, w, {"kind", "mu"});
    return guarded(w, [&] { return LossModel::exponential(number(j, "mu", w)); });
  }
  if (kind == "tabulated") {
    check_keys(j, w, {"kind", "points"});
    if (!j.contains("points") || !j.at("points").is_array()) {
      throw ConfigError("loss.points must be an array of [x, S] pairs");
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ConfigError("loss.points entries must be [x, S] number pairs");
      }
      pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return guarded(w, [&] { return LossModel::tabulated(pts); });
  }
  throw ConfigError("loss.kind '" + kind + "' is not pareto, exponential or tabulated");
}

json to_json(const LossModel& m) {
  switch (m.kind()) {
    case LossKind::Pareto: return {{"kind", "pareto"}, {"eta", m.eta()}, {"zeta", m.zeta()}};
    case LossKind::Exponential: return {{"kind", "exponential"}, {"mu", m.mu()}};
    case LossKind::Tabulated: {
      json pts = json::array();
      for (const auto& [x, s] : m.points()) pts.push_back({x, s});
      return {{"kind", "tabulated"}, {"points", pts}};
    }
  }
  return {};
}

Distortion distortion_from_json(const json& j, const std::string& w) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError(w + ".kind must be one of tvar, var, power, custom");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "tvar") {
    check_keys(j, w, {"kind", "alpha"});
    return guarded(w, [&] { return Distortion::tvar(number(j, "alpha", w)); });
  }
  if (kind == "var") {
    check_keys(j, w, {"kind", "alpha"});
    return guarded(w, [&] { return Distortion::var(number(j, "alpha", w)); });
  }
  if (kind == "power") {
    check_keys(j, w, {"kind", "beta"});
    return guarded(w, [&] { return Distortion::power(number(j, "beta", w)); });
  }
  if (kind == "custom") {
    check_keys(j, w, {"kind", "table"});
    std::vector<std::pair<double, double>> table;
    if (!j.contains("table") || !j.at("table").is_array()) {
      throw ConfigError(w + ".table must be an array of [p, g] pairs");
    }
    for (const auto& p : j.at("table")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ConfigError(w + ".table entries must be [p, g] number pairs");
      }
      table.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return guarded(w, [&] { return Distortion::custom(table); });
  }
  throw ConfigError(w + ".kind '" + kind + "' is not tvar, var, power or custom");
}

json to_json(const Distortion& d) {
  switch (d.kind()) {
    case DistortionKind::TVaR: return {{"kind", "tvar"}, {"alpha", d.level()}};
    case DistortionKind::VaR: return {{"kind", "var"}, {"alpha", d.level()}};
    case DistortionKind::Power: return {{"kind", "power"}, {"beta", d.level()}};
    case DistortionKind::Custom: {
      json t = json::array();
      for (const auto& [p, g] : d.table()) t.push_back({p, g});
      return {{"kind", "custom"}, {"table", t}};
    }
  }
  return {};
}

json to_json(const Indemnity& I, const PremiumParams* p, const LossModel* m) {
  auto opt = [](const std::optional<double>& v) -> json {
    return v ? json(*v) : json(nullptr);
  };
  json j;
  j["family"] = std::string(to_string(I.family()));
  if (const auto* sl = std::get_if<StopLossLayout>(&I.layout())) {
    j["d"] = sl->d;
  } else if (const auto* two = std::get_if<TwoLayerLayout>(&I.layout())) {
    j["d1"] = two->d1;
    j[I.family() == Family::I1 ? "dI" : "uI"] = two->width;
    j["d2"] = opt(two->d2);
  } else if (const auto* three = std::get_if<ThreeLayerLayout>(&I.layout())) {
    j["a"] = three->a;
    j["b"] = three->b;
    j["c"] = three->c;
    j["d"] = three->d;
    j["e"] = opt(three->e);
  } else {
    json bp = json::array();
    const auto& f = I.function();
    for (std::size_t i = 0; i < f.segment_count(); ++i) {
      bp.push_back({f.knots()[i], f.slopes()[i]});
    }
    j["breakpoints"] = bp;
  }
  if (m) {
    const double a = ceded_mean(I, *m);
    j["ceded_mean"] = a;
    if (p && !p->constant_premium()) {
      j["d_I"] = floor_width_factor(*p) * a;
      j["u_I"] = cap_width_factor(*p) * a;
    }
  }
  return j;
}

Scenario parse_scenario(const json& j) {
  check_keys(j, "", {"schema", "loss", "premium", "insurer", "reinsurer", "solver",
                     "seed", "beta_grid", "y_grid", "verify", "output"});
  if (!j.contains("schema") || !j.at("schema").is_number_integer() ||
      j.at("schema").get<int>() != 1) {
    throw ConfigError("key 'schema' must be 1");
  }
  Scenario s;
  if (!j.contains("loss")) throw ConfigError("missing key 'loss'");
  s.loss = loss_from_json(j.at("loss"));

  if (!j.contains("premium")) throw ConfigError("missing key 'premium'");
  const auto& pr = j.at("premium");
  check_keys(pr, "premium",
             {"theta0", "theta1", "theta1_bar", "theta2", "delta", "delta_grid", "a"});
  s.theta0 = number(pr, "theta0", "premium");
  s.theta1 = opt_number(pr, "theta1", "premium");
  s.theta1_bar = opt_number(pr, "theta1_bar", "premium");
  s.theta2 = number(pr, "theta2", "premium");
  s.delta = opt_number(pr, "delta", "premium");
  s.ceded_mean = opt_number(pr, "a", "premium");
  if (pr.contains("delta_grid")) s.delta_grid = grid_from_json(pr.at("delta_grid"), "premium.delta_grid");
  if (!s.theta1 && !s.theta1_bar) {
    throw ConfigError("premium: one of 'premium.theta1' or 'premium.theta1_bar' is required");
  }
  if (s.ceded_mean && *s.ceded_mean < 0.0) throw ConfigError("premium.a must be >= 0");
  if (!(s.floor_loading() <= s.theta0 && s.theta0 < s.theta2 && s.floor_loading() >= 0.0)) {
    throw ConfigError("premium: need 0 <= theta1 <= theta0 < theta2");
  }
  if (s.delta) guarded("premium", [&] { return s.params(*s.delta); });

  if (!j.contains("insurer")) throw ConfigError("missing key 'insurer'");
  s.insurer = distortion_from_json(j.at("insurer"), "insurer");
  if (j.contains("reinsurer")) s.reinsurer = distortion_from_json(j.at("reinsurer"), "reinsurer");

  if (j.contains("solver")) {
    const auto& so = j.at("solver");
    check_keys(so, "solver", {"outer_grid", "inner_grid", "refine_rel", "eps_val"});
    if (auto v = opt_number(so, "outer_grid", "solver")) s.solver.outer_grid = static_cast<int>(*v);
    if (auto v = opt_number(so, "inner_grid", "solver")) s.solver.inner_grid = static_cast<int>(*v);
    if (auto v = opt_number(so, "refine_rel", "solver")) s.solver.refine_rel = *v;
    if (auto v = opt_number(so, "eps_val", "solver")) s.eps_val = *v;
    if (s.solver.outer_grid < 2) throw ConfigError("solver.outer_grid must be >= 2");
    if (s.solver.inner_grid < 100) throw ConfigError("solver.inner_grid must be >= 100");
    if (!(s.solver.refine_rel > 0.0)) throw ConfigError("solver.refine_rel must be > 0");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("key 'seed' must be a nonnegative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("beta_grid")) s.beta_grid = list_or_grid(j.at("beta_grid"), "beta_grid");
  if (j.contains("y_grid")) s.y_grid = list_or_grid(j.at("y_grid"), "y_grid");
  if (j.contains("verify")) {
    const auto& v = j.at("verify");
    check_keys(v, "verify", {"mc_samples", "cases"});
    if (auto x = opt_number(v, "mc_samples", "verify")) {
      if (*x < 1000) throw ConfigError("verify.mc_samples must be >= 1000");
      s.mc_samples = static_cast<std::size_t>(*x);
    }
    if (auto x = opt_number(v, "cases", "verify")) {
      if (*x < 1) throw ConfigError("verify.cases must be >= 1");
      s.verify_cases = static_cast<int>(*x);
    }
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, "output", {"dir"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) throw ConfigError("key 'output.dir' must be a string");
      s.output_dir = o.at("dir").get<std::string>();
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(j);
}

double Scenario::floor_loading() const { return theta1 ? *theta1 : *theta1_bar; }

PremiumParams Scenario::params(double d) const {
  const double t1 = theta1 ? *theta1 : theta1_rule(d, theta0, *theta1_bar);
  return PremiumParams::make(d, theta0, t1, theta2);
}

std::vector<double> Scenario::deltas() const {
  if (delta_grid) return expand(*delta_grid);
  if (delta) return {*delta};
  throw ConfigError("premium: 'premium.delta' or 'premium.delta_grid' is required");
}

BowleyConfig Scenario::bowley(unsigned threads) const {
  if (!reinsurer) throw ConfigError("missing key 'reinsurer'");
  BowleyConfig c;
  c.loss = loss;
  c.theta0 = theta0;
  c.theta1_bar = floor_loading();
  c.theta2 = theta2;
  c.insurer = insurer;
  c.reinsurer = *reinsurer;
  if (delta_grid) {
    c.deltas = expand(*delta_grid);
  } else if (delta) {
    c.deltas = {*delta};
  } else {
    c.deltas = repremia::delta_grid(0.0, 1.0, 0.001);
  }
  c.eps_val = eps_val;
  c.solver = solver;
  c.threads = threads;
  return c;
}

json resolved(const Scenario& s) {
  json pr{{"theta0", s.theta0}, {"theta2", s.theta2}};
  if (s.theta1) pr["theta1"] = *s.theta1;
  if (s.theta1_bar) pr["theta1_bar"] = *s.theta1_bar;
  if (s.delta) pr["delta"] = *s.delta;
  if (s.delta_grid) {
    pr["delta_grid"] = {{"start", s.delta_grid->start}, {"end", s.delta_grid->end},
                        {"step", s.delta_grid->step}};
  }
  if (s.ceded_mean) pr["a"] = *s.ceded_mean;
  json j{{"schema", 1},
         {"loss", to_json(s.loss)},
         {"premium", pr},
         {"insurer", to_json(s.insurer)},
         {"solver",
          {{"outer_grid", s.solver.outer_grid},
           {"inner_grid", s.solver.inner_grid},
           {"refine_rel", s.solver.refine_rel},
           {"eps_val", s.eps_val >= 0.0 ? s.eps_val : 1e-6 * s.loss.mean()}}},
         {"seed", s.seed},
         {"verify", {{"mc_samples", s.mc_samples}, {"cases", s.verify_cases}}}};
  if (s.reinsurer) j["reinsurer"] = to_json(*s.reinsurer);
  if (!s.beta_grid.empty()) j["beta_grid"] = s.beta_grid;
  if (!s.y_grid.empty()) j["y_grid"] = s.y_grid;
  return j;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "inf"; }

}  // namespace repremia::cli

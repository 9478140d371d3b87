#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "repremia/bowley.hpp"
#include "repremia/errors.hpp"
#include "repremia/indemnity.hpp"
#include "repremia/insurer_solver.hpp"
#include "repremia/premium.hpp"
#include "repremia/riskmeasure.hpp"

namespace py = pybind11;
using namespace repremia;

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Optimal reinsurance under a reward-and-penalty premium";

  py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(mod, "InfeasibleError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(mod, "UnsupportedError", PyExc_NotImplementedError);
  py::register_exception<SingularityError>(mod, "SingularityError", PyExc_ArithmeticError);
  py::register_exception<ConstructionError>(mod, "ConstructionError", PyExc_RuntimeError);

  py::class_<LossModel>(mod, "LossModel")
      .def_static("pareto", &LossModel::pareto, py::arg("eta"), py::arg("zeta"))
      .def_static("exponential", &LossModel::exponential, py::arg("mu"))
      .def_static("tabulated", &LossModel::tabulated, py::arg("points"))
      .def("survival", &LossModel::survival)
      .def("cdf", &LossModel::cdf)
      .def("quantile", &LossModel::quantile)
      .def("layer_mean", &LossModel::layer_mean)
      .def("stop_loss", &LossModel::stop_loss)
      .def("invert_stop_loss", &LossModel::invert_stop_loss)
      .def("sample", &LossModel::sample, py::arg("n"), py::arg("seed"))
      .def_property_readonly("mean", &LossModel::mean);

  py::class_<PremiumParams>(mod, "PremiumParams")
      .def(py::init(&PremiumParams::make), py::arg("delta"), py::arg("theta0"),
           py::arg("theta1"), py::arg("theta2"))
      .def_property_readonly("delta", &PremiumParams::delta)
      .def_property_readonly("theta0", &PremiumParams::theta0)
      .def_property_readonly("theta1", &PremiumParams::theta1)
      .def_property_readonly("theta2", &PremiumParams::theta2);

  py::class_<SchemeThresholds>(mod, "SchemeThresholds")
      .def_readonly("a", &SchemeThresholds::a)
      .def_readonly("d_I", &SchemeThresholds::d_I)
      .def_readonly("u_I", &SchemeThresholds::u_I)
      .def_readonly("pi0", &SchemeThresholds::pi0)
      .def_readonly("pi1", &SchemeThresholds::pi1)
      .def_readonly("pi2", &SchemeThresholds::pi2);
  mod.def("scheme_thresholds", &scheme_thresholds, py::arg("params"), py::arg("a"));

  mod.def("realized_premium", [](const PremiumParams& p, double a, double y) {
    return realized_premium(p, scheme_thresholds(p, a), y);
  }, py::arg("params"), py::arg("a"), py::arg("y"));
  mod.def("premium_branch", [](const PremiumParams& p, double a, double y) {
    return std::string(to_string(premium_branch(p, scheme_thresholds(p, a), y)));
  }, py::arg("params"), py::arg("a"), py::arg("y"));

  py::class_<Distortion>(mod, "Distortion")
      .def_static("tvar", &Distortion::tvar, py::arg("alpha"))
      .def_static("var", &Distortion::var, py::arg("alpha"))
      .def_static("power", &Distortion::power, py::arg("beta"))
      .def_static("custom", &Distortion::custom, py::arg("table"))
      .def("__call__", &Distortion::operator())
      .def_property_readonly("concave", &Distortion::concave)
      .def("__repr__", &Distortion::describe);

  py::class_<Indemnity>(mod, "Indemnity")
      .def_static("stop_loss", &Indemnity::stop_loss, py::arg("d"))
      .def_static("general",
                  py::overload_cast<const std::vector<std::pair<double, double>>&>(
                      &Indemnity::general),
                  py::arg("breakpoints"))
      .def("__call__", &Indemnity::evaluate)
      .def("retained", &Indemnity::retained)
      .def_property_readonly("family",
                             [](const Indemnity& I) { return std::string(to_string(I.family())); });
  mod.def("complete_I1", &complete_I1, py::arg("loss"), py::arg("params"), py::arg("a"),
          py::arg("d1"));
  mod.def("complete_I2", &complete_I2, py::arg("loss"), py::arg("params"), py::arg("a"),
          py::arg("d1"));
  mod.def("ceded_mean", &ceded_mean, py::arg("contract"), py::arg("loss"));

  mod.def("rho_loss", &rho_loss, py::arg("g"), py::arg("loss"));
  mod.def("insurer_risk", [](const Distortion& g, const LossModel& m, const PremiumParams& p,
                             const Indemnity& I) {
    return rho_monotone_transform(g, m, insurer_position(p, bind_thresholds(p, I, m), I));
  }, py::arg("g"), py::arg("loss"), py::arg("params"), py::arg("contract"));
  mod.def("reinsurer_value", &reinsurer_value, py::arg("loss"), py::arg("params"),
          py::arg("g"), py::arg("contract"));

  py::class_<SolveReport>(mod, "SolveReport")
      .def_readonly("contract", &SolveReport::contract)
      .def_readonly("a_star", &SolveReport::a_star)
      .def_readonly("value", &SolveReport::value)
      .def_property_readonly("d1", [](const SolveReport& r) { return r.inner.d1; })
      .def_property_readonly("d2", [](const SolveReport& r) { return r.inner.d2; })
      .def_property_readonly("branch",
                             [](const SolveReport& r) { return std::string(to_string(r.inner.branch)); })
      .def_readonly("warnings", &SolveReport::warnings);
  mod.def("solve_insurer", [](const LossModel& m, const PremiumParams& p, const Distortion& g,
                              int outer_grid, int inner_grid, unsigned threads) {
    SolverSettings s;
    s.outer_grid = outer_grid;
    s.inner_grid = inner_grid;
    s.threads = threads;
    py::gil_scoped_release release;
    return solve_insurer(m, p, g, s);
  }, py::arg("loss"), py::arg("params"), py::arg("g"), py::arg("outer_grid") = 200,
     py::arg("inner_grid") = 200, py::arg("threads") = 1);

  mod.def("theta1_rule", &theta1_rule, py::arg("delta"), py::arg("theta0"), py::arg("theta1_bar"));
  mod.def("bowley_params", &bowley_params, py::arg("delta"), py::arg("theta0"),
          py::arg("theta1_bar"), py::arg("theta2"));
  mod.def("delta_grid", &delta_grid, py::arg("start"), py::arg("end"), py::arg("step"));

  py::class_<BowleyConfig>(mod, "BowleyConfig")
      .def(py::init<>())
      .def_readwrite("loss", &BowleyConfig::loss)
      .def_readwrite("theta0", &BowleyConfig::theta0)
      .def_readwrite("theta1_bar", &BowleyConfig::theta1_bar)
      .def_readwrite("theta2", &BowleyConfig::theta2)
      .def_readwrite("insurer", &BowleyConfig::insurer)
      .def_readwrite("reinsurer", &BowleyConfig::reinsurer)
      .def_readwrite("deltas", &BowleyConfig::deltas)
      .def_readwrite("eps_val", &BowleyConfig::eps_val)
      .def_readwrite("threads", &BowleyConfig::threads);

  py::class_<BowleyRow>(mod, "BowleyRow")
      .def_readonly("delta", &BowleyRow::delta)
      .def_readonly("theta1", &BowleyRow::theta1)
      .def_readonly("contract", &BowleyRow::contract)
      .def_readonly("a", &BowleyRow::a)
      .def_readonly("d1", &BowleyRow::d1)
      .def_readonly("d2", &BowleyRow::d2)
      .def_readonly("insurer_value", &BowleyRow::insurer_value)
      .def_readonly("reinsurer_value", &BowleyRow::reinsurer_value);
  py::class_<BowleyReport>(mod, "BowleyReport")
      .def_readonly("rows", &BowleyReport::rows)
      .def_readonly("delta_star", &BowleyReport::delta_star)
      .def_readonly("delta_min", &BowleyReport::delta_min)
      .def_readonly("delta_max", &BowleyReport::delta_max)
      .def_readonly("contract_star", &BowleyReport::contract_star);
  mod.def("sweep", [](const BowleyConfig& c) {
    py::gil_scoped_release release;
    return sweep(c);
  }, py::arg("config"));

  py::class_<BetaPoint>(mod, "BetaPoint")
      .def_readonly("beta", &BetaPoint::beta)
      .def_readonly("delta_star", &BetaPoint::delta_star)
      .def_readonly("delta_min", &BetaPoint::delta_min)
      .def_readonly("delta_max", &BetaPoint::delta_max)
      .def_readonly("reinsurer_value", &BetaPoint::reinsurer_value);
  mod.def("beta_curve", [](const BowleyConfig& c, const std::vector<double>& betas) {
    py::gil_scoped_release release;
    return beta_curve(c, betas);
  }, py::arg("config"), py::arg("betas"));
}

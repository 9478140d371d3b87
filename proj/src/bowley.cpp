#include "repremia/bowley.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "repremia/errors.hpp"
#include "repremia/premium.hpp"

namespace repremia {

double theta1_rule(double delta, double theta0, double theta1_bar) {
  return std::max(theta0 - delta, theta1_bar);
}

PremiumParams bowley_params(double delta, double theta0, double theta1_bar,
                            double theta2) {
  if (!(0.0 <= theta1_bar && theta1_bar <= theta0 && theta0 < theta2)) {
    throw DomainError("bowley: need 0 <= theta1_bar <= theta0 < theta2");
  }
  return PremiumParams::make(delta, theta0, theta1_rule(delta, theta0, theta1_bar),
                             theta2);
}

double reinsurer_value(const LossModel& m, const PremiumParams& p,
                       const Distortion& g2, const Indemnity& I) {
  if (I.is_zero()) return 0.0;
  const auto t = bind_thresholds(p, I, m);
  return rho_monotone_transform(g2, m, reinsurer_position(p, t, I));
}

std::vector<double> delta_grid(double start, double end, double step) {
  if (!(step > 0.0) || !(end >= start)) {
    throw DomainError("delta grid: need step > 0 and end >= start");
  }
  const auto n = static_cast<long>(std::floor((end - start) / step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) {
    // round away the accumulated binary error so grid values print cleanly
    const double v = start + static_cast<double>(k) * step;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

std::vector<InsurerRow> insurer_rows(const BowleyConfig& cfg) {
  std::vector<PremiumParams> params;
  params.reserve(cfg.deltas.size());
  for (double d : cfg.deltas) {
    params.push_back(bowley_params(d, cfg.theta0, cfg.theta1_bar, cfg.theta2));
  }
  std::vector<std::optional<InsurerRow>> out(cfg.deltas.size());
  SolverSettings inner = cfg.solver;
  inner.threads = 1;  // parallelism is across rows
  detail::parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
    out[i] = InsurerRow{cfg.deltas[i], params[i].theta1(),
                        solve_insurer(cfg.loss, params[i], cfg.insurer, inner)};
  });
  std::vector<InsurerRow> rows;
  rows.reserve(out.size());
  for (auto& r : out) rows.push_back(std::move(*r));
  return rows;
}

BowleyReport evaluate_rows(const BowleyConfig& cfg,
                           const std::vector<InsurerRow>& rows,
                           const Distortion& g2) {
  if (rows.empty()) throw DomainError("bowley: empty delta grid");
  BowleyReport rep;
  rep.eps_val = cfg.eps_val >= 0.0 ? cfg.eps_val : 1e-6 * cfg.loss.mean();
  for (const auto& r : rows) {
    const auto p = bowley_params(r.delta, cfg.theta0, cfg.theta1_bar, cfg.theta2);
    BowleyRow row;
    row.delta = r.delta;
    row.theta1 = r.theta1;
    row.contract = r.report.contract;
    row.branch = r.report.inner.branch;
    row.a = r.report.a_star;
    row.d1 = r.report.inner.d1;
    row.d2 = r.report.inner.d2;
    row.d_I = p.constant_premium() ? 0.0 : floor_width_factor(p) * row.a;
    row.insurer_value = r.report.value;
    row.reinsurer_value = reinsurer_value(cfg.loss, p, g2, row.contract);
    row.warnings = r.report.warnings;
    rep.rows.push_back(std::move(row));
  }
  double best = rep.rows.front().reinsurer_value;
  for (const auto& r : rep.rows) best = std::min(best, r.reinsurer_value);
  bool found = false;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    if (rep.rows[i].reinsurer_value > best + rep.eps_val) continue;
    if (!found) {
      rep.star_index = i;
      rep.delta_min = rep.rows[i].delta;
      found = true;
    }
    rep.delta_max = rep.rows[i].delta;
    ++rep.optimal_count;
  }
  rep.delta_star = rep.rows[rep.star_index].delta;
  rep.contract_star = rep.rows[rep.star_index].contract;
  return rep;
}

BowleyReport sweep(const BowleyConfig& cfg) {
  return evaluate_rows(cfg, insurer_rows(cfg), cfg.reinsurer);
}

std::vector<BetaPoint> beta_curve(const BowleyConfig& cfg,
                                  const std::vector<double>& betas) {
  const auto rows = insurer_rows(cfg);
  std::vector<BetaPoint> out;
  out.reserve(betas.size());
  for (double b : betas) {
    const auto rep = evaluate_rows(cfg, rows, cfg.reinsurer.with_level(b));
    out.push_back({b, rep.delta_star, rep.delta_min, rep.delta_max,
                   rep.rows[rep.star_index].reinsurer_value});
  }
  return out;
}

}  // namespace repremia

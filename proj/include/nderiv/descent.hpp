#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nderiv/line_search.hpp"
#include "nderiv/objective.hpp"
#include "nderiv/sobolev.hpp"
#include "nderiv/transform.hpp"
#include "nderiv/volterra.hpp"

namespace nderiv {

enum class StopReason { DiscrepancyMet, HeuristicUptick, Saturation, MaxIter };

/// Stopping rule: Morozov discrepancy (known noise level) or the
/// heuristic fluctuation criterion (noise level unknown).
struct StoppingRule {
  enum class Kind { Discrepancy, Heuristic };
  Kind kind = Kind::Heuristic;

  // Discrepancy: stop when ||T psi - g3|| < tau * delta.
  double delta = 0.0;
  double tau = 1.0;

  // Heuristic: watch the integrated residuals and stop as soon as either
  //   (a) one of them upticks (relative growth > uptick), or
  //   (b) progress stalls: the per-step drop of the data residual falls to
  //       fit_tol times the first step's drop, or residual_u stays flat
  //       within sat_tol for `patience` consecutive steps.
  // In both cases the returned iterate is the one preceding the detection.
  double uptick = 1e-3;
  int patience = 3;
  double sat_tol = 1e-4;
  double fit_tol = 0.05;

  static StoppingRule discrepancy(double delta, double tau = 1.0) {
    if (!(delta > 0.0))
      throw std::invalid_argument("StoppingRule: discrepancy needs delta > 0");
    if (!(tau >= 1.0))
      throw std::invalid_argument("StoppingRule: discrepancy needs tau >= 1");
    StoppingRule r;
    r.kind = Kind::Discrepancy;
    r.delta = delta;
    r.tau = tau;
    return r;
  }
  static StoppingRule heuristic(double uptick = 1e-3, int patience = 3,
                                double sat_tol = 1e-4, double fit_tol = 0.05) {
    StoppingRule r;
    r.kind = Kind::Heuristic;
    r.uptick = uptick;
    r.patience = patience;
    r.sat_tol = sat_tol;
    r.fit_tol = fit_tol;
    return r;
  }
};

struct DescentConfig {
  CgVariant cg = CgVariant::None;
  BoundaryKind bc = BoundaryKind::Neumann;
  double omega = 1.0;  // direction = omega * Sobolev grad + (1-omega) * L2 grad
  StoppingRule stop;
  int max_iter = 500;
  std::optional<SampledFunction> psi0;
  bool record_history = true;
  bool keep_iterates = false;  // retain every psi_m in the report
};

struct IterationRecord {
  int m = 0;
  double G_value = 0.0;
  double residual_g = 0.0;       // ||T psi_m - g3||
  double residual_u = 0.0;       // ||u_psi_m - u||
  double residual_uprime = 0.0;  // ||u'_psi_m - u'||
  double step_alpha = 0.0;       // step taken from this iterate (0 at stop)
  double grad_l2_norm = 0.0;
};

struct DescentReport {
  SampledFunction phi_hat;
  SampledFunction smoothed_fit;  // T phi_hat
  StopReason stop_reason = StopReason::MaxIter;
  int stop_index = 0;
  std::vector<IterationRecord> history;
  std::vector<SampledFunction> iterates;  // filled iff keep_iterates
};

inline bool discrepancy_stop(double residual_g, double delta, double tau) {
  return residual_g < tau * delta;
}

struct HeuristicDecision {
  bool stop = false;
  int index = 0;
  StopReason reason = StopReason::HeuristicUptick;
};

/// Examine the history after its latest entry and decide whether the
/// fluctuation criterion fires; on stop, return the preceding iterate (the
/// last one before the detected uptick or stall).
inline HeuristicDecision heuristic_stop(
    const std::vector<IterationRecord>& history, const StoppingRule& rule) {
  HeuristicDecision d;
  const int m = static_cast<int>(history.size()) - 1;
  if (m < 1) return d;

  const auto& cur = history[m];
  const auto& prev = history[m - 1];
  const bool uptick_u = cur.residual_u > prev.residual_u * (1.0 + rule.uptick);
  const bool uptick_g = cur.residual_g > prev.residual_g * (1.0 + rule.uptick);

  // Progress stall: the data residual improves by no more than fit_tol of
  // what the first step achieved.
  bool stalled = false;
  if (m >= 2) {
    const double first_drop = history[0].residual_g - history[1].residual_g;
    stalled = prev.residual_g - cur.residual_g <= rule.fit_tol * first_drop;
  }
  // Flat residual_u over the last `patience` steps.
  bool saturated = m >= rule.patience + 1;
  for (int k = 1; saturated && k <= rule.patience; ++k) {
    const double ref = history[m - k].residual_u;
    if (!(ref > 0.0) ||
        std::abs(cur.residual_u - ref) / ref >= rule.sat_tol)
      saturated = false;
  }

  if (uptick_u || uptick_g || stalled || saturated) {
    d.stop = true;
    d.reason = (uptick_u || uptick_g) ? StopReason::HeuristicUptick
                                      : StopReason::Saturation;
    d.index = m - 1;
  }
  return d;
}

namespace detail {

inline IterationRecord make_record(int m, const SampledFunction& psi,
                                   const TransformedData& data,
                                   const SampledFunction& l2g) {
  IterationRecord rec;
  rec.m = m;
  SampledFunction upp = u_prime_of_psi(psi, data);
  rec.residual_uprime = l2_norm(upp - data.u_prime);
  rec.G_value = rec.residual_uprime * rec.residual_uprime;
  rec.residual_u = l2_norm(cumulative_integral(upp) - data.u);
  rec.residual_g = l2_norm(apply_T(psi) - data.g3);
  rec.grad_l2_norm = l2_norm(l2g);
  return rec;
}

}  // namespace detail

/// Algorithm 1: iterate psi_{m+1} = psi_m - alpha_m h_m until the configured
/// stopping rule fires. h_m blends the Neuberger and L2 gradients and is
/// optionally conjugated by a Polak-Ribiere update.
inline DescentReport run_descent(const TransformedData& data,
                                 const DescentConfig& config) {
  if (config.max_iter < 1)
    throw std::invalid_argument("run_descent: max_iter must be >= 1");
  if (!(config.omega >= 0.0 && config.omega <= 1.0))
    throw std::invalid_argument("run_descent: omega must lie in [0,1]");

  const bool heuristic = config.stop.kind == StoppingRule::Kind::Heuristic;
  SampledFunction psi =
      config.psi0 ? *config.psi0 : SampledFunction(data.grid);
  require_same_grid(psi, data.g3, "run_descent");

  DescentReport report;
  const bool snapshot = heuristic || config.keep_iterates;
  std::vector<SampledFunction> iterates;

  SampledFunction l2_old, g_old, h_dir;
  bool have_history = false;
  const double grad_floor = 1e-13 * (1.0 + l2_norm(data.u_prime));

  auto finish = [&](StopReason reason, int index) {
    report.stop_reason = reason;
    report.stop_index = index;
    report.phi_hat = snapshot ? iterates[index] : psi;
    report.smoothed_fit = apply_T(report.phi_hat);
    if (config.keep_iterates) report.iterates = std::move(iterates);
    if (!config.record_history) report.history.clear();
    return report;
  };

  for (int m = 0; m <= config.max_iter; ++m) {
    SampledFunction l2g = l2_gradient(psi, data);
    report.history.push_back(detail::make_record(m, psi, data, l2g));
    if (snapshot) iterates.push_back(psi);
    const IterationRecord& rec = report.history.back();

    if (config.stop.kind == StoppingRule::Kind::Discrepancy &&
        discrepancy_stop(rec.residual_g, config.stop.delta, config.stop.tau))
      return finish(StopReason::DiscrepancyMet, m);
    if (heuristic) {
      HeuristicDecision d = heuristic_stop(report.history, config.stop);
      if (d.stop) return finish(d.reason, d.index);
    }
    if (m == config.max_iter) return finish(StopReason::MaxIter, m);
    if (rec.grad_l2_norm <= grad_floor) return finish(StopReason::Saturation, m);

    // Descent direction.
    SampledFunction g = sobolev_gradient(l2g, config.bc);
    if (config.omega != 1.0)
      g = config.omega * g + (1.0 - config.omega) * l2g;
    if (config.cg == CgVariant::None || !have_history) {
      h_dir = g;
    } else {
      const double gamma =
          pr_coefficient(g, g_old, l2g, l2_old, config.cg);
      h_dir = next_direction(h_dir, g, gamma);
      if (directional_derivative(psi, h_dir, data) <= 0.0) h_dir = g;
    }

    const double alpha0 = initial_step(psi, h_dir, data);
    if (!(alpha0 > 0.0)) return finish(StopReason::Saturation, m);
    LineSearchResult ls = search(
        [&](double a) { return evaluate_G(psi - a * h_dir, data); }, alpha0);
    if (!(ls.alpha > 0.0)) return finish(StopReason::Saturation, m);

    report.history.back().step_alpha = ls.alpha;
    psi = psi - ls.alpha * h_dir;
    l2_old = l2g;
    g_old = g;
    have_history = true;
  }
  return finish(StopReason::MaxIter, config.max_iter);  // unreachable
}

/// Landweber-style contrast: steepest descent on ||T psi - g3||^2 with
/// exact line search. Exhibits a monotone data residual (no fluctuation)
/// while the iterate error is still semi-convergent.
inline DescentReport run_landweber(const TransformedData& data,
                                   const DescentConfig& config) {
  const Grid& grid = data.grid;
  SampledFunction psi =
      config.psi0 ? *config.psi0 : SampledFunction(grid);
  require_same_grid(psi, data.g3, "run_landweber");

  DescentReport report;
  std::vector<SampledFunction> iterates;

  // Exactly max_iter records: steps happen between consecutive records.
  for (int m = 0; m < config.max_iter; ++m) {
    SampledFunction resid = apply_T(psi) - data.g3;
    SampledFunction wr(grid);
    for (int i = 0; i < grid.n; ++i)
      wr[i] = quad_weight(grid, i) * resid[i];
    SampledFunction grad = apply_T_transpose(wr);
    for (int i = 0; i < grid.n; ++i)
      grad[i] = 2.0 * grad[i] / quad_weight(grid, i);

    report.history.push_back(detail::make_record(m, psi, data, grad));
    if (config.keep_iterates) iterates.push_back(psi);

    if (m == config.max_iter - 1) break;
    const double gp = l2_inner(grad, grad);
    SampledFunction tg = apply_T(grad);
    const double gpp = 2.0 * l2_inner(tg, tg);
    if (!(gpp > 0.0) || gp <= 0.0) break;
    const double alpha = gp / gpp;
    report.history.back().step_alpha = alpha;
    psi = psi - alpha * grad;
  }

  report.stop_reason = StopReason::MaxIter;
  report.stop_index = static_cast<int>(report.history.size()) - 1;
  report.phi_hat = psi;
  report.smoothed_fit = apply_T(psi);
  if (config.keep_iterates) report.iterates = std::move(iterates);
  if (!config.record_history) report.history.clear();
  return report;
}

}  // namespace nderiv

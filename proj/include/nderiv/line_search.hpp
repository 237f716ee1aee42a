#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "nderiv/objective.hpp"

namespace nderiv {

struct LineSearchResult {
  double alpha = 0.0;
  double f_alpha = 0.0;
  int evals = 0;
};

/// Quadratic-exact initial step alpha0 = G'(psi)[h] / G''[h,h]. Since G is
/// exactly quadratic this is the exact minimizer along h.
inline double initial_step(const SampledFunction& psi, const SampledFunction& h,
                           const TransformedData& data) {
  const double gp = directional_derivative(psi, h, data);
  const double gpp = second_derivative(h, h, data);
  if (!(gpp > 0.0) || !std::isfinite(gpp)) {
    if (std::abs(gp) < 1e-300) return 0.0;
    throw std::runtime_error(
        "initial_step: degenerate direction, G''[h,h] = " +
        std::to_string(gpp) + " with G'[h] = " + std::to_string(gp));
  }
  return gp / gpp;
}

/// Bracket along Algorithm 1's arithmetic expansion, then minimize by
/// successive parabolic interpolation with a golden-section safeguard.
/// The candidate-step termination rule makes the search accept alpha0
/// after a handful of evaluations when f is an exact quadratic.
inline LineSearchResult search(const std::function<double(double)>& f,
                               double alpha0) {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0))
    throw std::invalid_argument("search: requires alpha0 > 0, got " +
                                std::to_string(alpha0));
  constexpr int kMaxEvals = 100;
  constexpr double kGold = 0.3819660112501051;  // 2 - golden ratio

  int evals = 0;
  auto eval = [&](double a) {
    const double v = f(a);
    ++evals;
    if (!std::isfinite(v))
      throw std::runtime_error("search: objective is not finite at alpha = " +
                               std::to_string(a));
    return v;
  };

  const double f0 = eval(0.0);
  double f1 = eval(alpha0);

  // Bracketing triple l < m < r with fm <= min(fl, fr).
  double l, m, r, fl, fm, fr;
  bool have_triple = false;

  if (f1 > f0) {
    // Shrink branch: probe golden points toward 0 looking for an interior
    // value below f(0); if none appears, the minimum sits at alpha = 0.
    double hi = alpha0, fhi = f1;
    double t = kGold * alpha0;
    while (evals < kMaxEvals && t > 1e-12 * alpha0) {
      const double ft = eval(t);
      if (ft < f0) {
        l = 0.0, m = t, r = hi;
        fl = f0, fm = ft, fr = fhi;
        have_triple = true;
        break;
      }
      hi = t;
      fhi = ft;
      t *= kGold;
    }
    if (!have_triple) return {0.0, f0, evals};
  } else {
    // Expansion branch: alpha_k = k * alpha0 while f keeps decreasing.
    double prev_a = 0.0, prev_f = f0;
    double cur_a = alpha0, cur_f = f1;
    int k = 2;
    while (evals < kMaxEvals) {
      const double na = k * alpha0;
      const double nf = eval(na);
      if (nf >= cur_f) {
        l = prev_a, m = cur_a, r = na;
        fl = prev_f, fm = cur_f, fr = nf;
        have_triple = true;
        break;
      }
      prev_a = cur_a;
      prev_f = cur_f;
      cur_a = na;
      cur_f = nf;
      ++k;
    }
    if (!have_triple) return {cur_a, cur_f, evals};
  }

  while (evals < kMaxEvals) {
    const double tol = 1e-10 * alpha0 + 1e-6 * std::abs(m);
    if (r - l <= 2 * tol) break;

    // Parabolic vertex through (l, fl), (m, fm), (r, fr).
    const double d1 = (m - l) * (fm - fr);
    const double d2 = (m - r) * (fm - fl);
    double t;
    const double denom = 2.0 * (d1 - d2);
    if (denom != 0.0) {
      t = m - ((m - l) * d1 - (m - r) * d2) / denom;
    } else {
      t = l - 1.0;  // force the golden fallback below
    }
    if (!(t > l && t < r) || !std::isfinite(t)) {
      // Golden-section step into the larger subinterval.
      t = (m - l > r - m) ? m - kGold * (m - l) : m + kGold * (r - m);
    }
    if (std::abs(t - m) <= tol) break;

    const double ft = eval(t);
    if (ft < fm) {
      if (t < m) {
        r = m, fr = fm;
      } else {
        l = m, fl = fm;
      }
      m = t, fm = ft;
    } else {
      if (t < m) {
        l = t, fl = ft;
      } else {
        r = t, fr = ft;
      }
    }
  }

  if (f0 <= fm) return {0.0, f0, evals};
  return {m, fm, evals};
}

}  // namespace nderiv

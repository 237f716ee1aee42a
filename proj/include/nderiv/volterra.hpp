#pragma once

#include "nderiv/grid.hpp"

namespace nderiv {

/// (T_D psi)(x) = integral from a to x of psi.
inline SampledFunction apply_TD(const SampledFunction& psi) {
  return cumulative_integral(psi);
}

/// (T_D* f)(x) = integral from x to b of f.
/// Computed as integral(f) - cumulative_integral(f) so that
/// T_D f + T_D* f is exactly the constant integral(f) at every node.
inline SampledFunction apply_TD_star(const SampledFunction& f) {
  SampledFunction F = cumulative_integral(f);
  const double total = F[F.size() - 1];
  SampledFunction out(f.grid);
  for (int i = 0; i < out.size(); ++i) out[i] = total - F[i];
  return out;
}

/// T = T_D - T_D*; symmetric role of the two endpoints.
inline SampledFunction apply_T(const SampledFunction& psi) {
  SampledFunction F = cumulative_integral(psi);
  const double total = F[F.size() - 1];
  SampledFunction out(psi.grid);
  for (int i = 0; i < out.size(); ++i) out[i] = 2 * F[i] - total;
  return out;
}

/// T* = T_D* - T_D = -T.
inline SampledFunction apply_T_star(const SampledFunction& f) {
  SampledFunction out = apply_T(f);
  for (int i = 0; i < out.size(); ++i) out[i] = -out[i];
  return out;
}

/// Transpose of the discrete matrix of T (in the unweighted node basis)
/// applied to v: T = 2C - 1 e_n^T C gives T^T v = C^T (2v - e_n * sum(v)).
inline SampledFunction apply_T_transpose(const SampledFunction& v) {
  double total = 0.0;
  for (int i = 0; i < v.size(); ++i) total += v[i];
  SampledFunction w(v.grid);
  for (int i = 0; i < v.size(); ++i) w[i] = 2 * v[i];
  w[v.size() - 1] -= total;
  return cumulative_integral_transpose(w);
}

}  // namespace nderiv

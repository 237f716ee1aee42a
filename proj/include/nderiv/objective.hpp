#pragma once

#include "nderiv/grid.hpp"
#include "nderiv/transform.hpp"
#include "nderiv/volterra.hpp"

namespace nderiv {

/// G(psi) = || u' - u'_psi ||^2 (squared-norm convention).
inline double evaluate_G(const SampledFunction& psi,
                         const TransformedData& data) {
  SampledFunction r = u_prime_of_psi(psi, data) - data.u_prime;
  return l2_inner(r, r);
}

/// Exact discrete L2-gradient of G: the vector grad with
/// G'(psi)[h] = <h, grad>_w for every h, where <.,.>_w is the trapezoid
/// inner product. With L psi = u'_psi written as L = (-I + (1/(b-a)) w 1^T) C T
/// in the node basis, the chain rule gives
///   grad = 2 W^{-1} T^T C^T W q,  q = -r + (integral r)/(b-a),  r = u'_psi - u'.
/// Transposing the discrete operator exactly (rather than discretizing the
/// continuum adjoint T*(-2(u - u_psi))) keeps the finite-difference and
/// quadratic-expansion identities tight to rounding.
inline SampledFunction l2_gradient(const SampledFunction& psi,
                                   const TransformedData& data) {
  const Grid& grid = data.grid;
  SampledFunction r = u_prime_of_psi(psi, data) - data.u_prime;
  const double mean_term = integral(r) / (grid.b - grid.a);
  SampledFunction q(grid);
  for (int i = 0; i < q.size(); ++i)
    q[i] = quad_weight(grid, i) * (-r[i] + mean_term);
  SampledFunction g = apply_T_transpose(cumulative_integral_transpose(q));
  for (int i = 0; i < g.size(); ++i) g[i] = 2 * g[i] / quad_weight(grid, i);
  return g;
}

/// Continuum-form L2-gradient for the one-sided operator T_D:
/// T_D*(-2(u - u_psi)); vanishes identically at x = b, which is the
/// endpoint pathology that motivates the symmetric operator T.
inline SampledFunction l2_gradient_TD(const SampledFunction& psi,
                                      const TransformedData& data) {
  // u_psi for the T_D formulation: -u_psi'' = T_D psi, zero boundary values.
  SampledFunction J1 = cumulative_integral(apply_TD(psi));
  SampledFunction J2 = cumulative_integral(J1);
  const double slope = J2[J2.size() - 1] / (data.grid.b - data.grid.a);
  SampledFunction up(data.grid);
  for (int i = 0; i < up.size(); ++i) up[i] = -J1[i] + slope;
  SampledFunction u_psi = cumulative_integral(up);
  SampledFunction diff(data.grid);
  for (int i = 0; i < diff.size(); ++i) diff[i] = -2 * (data.u[i] - u_psi[i]);
  return apply_TD_star(diff);
}

/// G'(psi)[h] = 2 <L h, u'_psi - u'>; equals l2_inner(h, l2_gradient(psi)).
inline double directional_derivative(const SampledFunction& psi,
                                     const SampledFunction& h,
                                     const TransformedData& data) {
  SampledFunction r = u_prime_of_psi(psi, data) - data.u_prime;
  return 2 * l2_inner(u_prime_of_psi(h, data), r);
}

/// G''[h,k] = 2 <L h, L k>; independent of psi (G is quadratic), symmetric,
/// and positive definite on nonzero directions.
inline double second_derivative(const SampledFunction& h,
                                const SampledFunction& k,
                                const TransformedData& data) {
  return 2 * l2_inner(u_prime_of_psi(h, data), u_prime_of_psi(k, data));
}

}  // namespace nderiv

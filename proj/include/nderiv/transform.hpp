#pragma once

#include <numbers>

#include "nderiv/grid.hpp"
#include "nderiv/volterra.hpp"

namespace nderiv {

/// The smoothed working data: u solves -u'' = g3 with u(a) = u(b) = 0,
/// where g3 = 2*g_tilde - (g_tilde(a) + g_tilde(b)). Both u and u' are
/// produced by quadrature of the raw samples only -- the data is never
/// differentiated numerically.
struct TransformedData {
  Grid grid;
  SampledFunction u;
  SampledFunction u_prime;
  SampledFunction g_tilde;
  double g_a = 0.0;
  double g_b = 0.0;
  SampledFunction g3;
  double lambda1 = 0.0;  // smallest eigenvalue of -d^2/dx^2 on H^1_0(a,b)
};

/// Build u, u' from noisy samples. The boundary samples default to the
/// first/last data values; pass trusted values to override them.
inline TransformedData transform_data(const SampledFunction& g_tilde,
                                      double g_a, double g_b) {
  const Grid& grid = g_tilde.grid;
  const double L = grid.b - grid.a;
  const double s = g_a + g_b;

  TransformedData d;
  d.grid = grid;
  d.g_tilde = g_tilde;
  d.g_a = g_a;
  d.g_b = g_b;
  d.lambda1 = std::numbers::pi * std::numbers::pi / (L * L);

  d.g3 = SampledFunction(grid);
  for (int i = 0; i < grid.n; ++i) d.g3[i] = 2 * g_tilde[i] - s;

  SampledFunction I1 = cumulative_integral(g_tilde);
  SampledFunction I2 = cumulative_integral(I1);
  const double I2b = I2[grid.n - 1];
  const double C = 2 * I2b - s * L * L / 2;

  d.u = SampledFunction(grid);
  d.u_prime = SampledFunction(grid);
  for (int i = 0; i < grid.n; ++i) {
    const double xa = grid.node(i) - grid.a;
    const double bx = grid.b - grid.node(i);
    d.u[i] = 2 * (I2b - I2[i]) - s * (L * L / 2 - xa * xa / 2) - bx / L * C;
    d.u_prime[i] = -2 * I1[i] + s * xa + C / L;
  }
  return d;
}

inline TransformedData transform_data(const SampledFunction& g_tilde) {
  return transform_data(g_tilde, g_tilde[0], g_tilde[g_tilde.size() - 1]);
}

/// u'_psi for the trial iterate psi: the unique derivative of the solution
/// of -u_psi'' = T psi with u_psi(a) = u_psi(b) = 0, written in closed
/// quadrature form (no linear solve).
inline SampledFunction u_prime_of_psi(const SampledFunction& psi,
                                      const TransformedData& data) {
  require_same_grid(psi, data.g3, "u_prime_of_psi");
  SampledFunction J1 = cumulative_integral(apply_T(psi));
  SampledFunction J2 = cumulative_integral(J1);
  const double c = J2[J2.size() - 1] / (data.grid.b - data.grid.a);
  SampledFunction out(data.grid);
  for (int i = 0; i < out.size(); ++i) out[i] = -J1[i] + c;
  return out;
}

inline SampledFunction u_of_psi(const SampledFunction& psi,
                                const TransformedData& data) {
  return cumulative_integral(u_prime_of_psi(psi, data));
}

}  // namespace nderiv

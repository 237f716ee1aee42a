#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "nderiv/grid.hpp"

namespace nderiv {

/// Boundary conditions of the Helmholtz preconditioner -g'' + g = rhs.
enum class BoundaryKind { Dirichlet, Neumann, RobinLeft, RobinRight };

/// Conjugate-direction scheme: None is pure Sobolev descent; the other two
/// are Polak-Ribiere updates measured in different inner products.
enum class CgVariant { None, L2H1, H1H1 };

namespace detail {

/// Thomas algorithm for a tridiagonal system; diag/rhs are overwritten.
inline std::vector<double> thomas_solve(std::vector<double> lower,
                                        std::vector<double> diag,
                                        std::vector<double> upper,
                                        std::vector<double> rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    const double m = lower[i - 1] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i)
    x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace detail

/// Solve -g'' + g = rhs by second-order central differences. Neumann ends
/// use ghost-point elimination (g_{-1} = g_1), which keeps second order.
inline SampledFunction helmholtz_solve(const SampledFunction& rhs,
                                       BoundaryKind bc) {
  const int n = rhs.size();
  const double h2 = rhs.grid.h * rhs.grid.h;

  std::vector<double> lower(n - 1, -1.0 / h2);
  std::vector<double> diag(n, 1.0 + 2.0 / h2);
  std::vector<double> upper(n - 1, -1.0 / h2);
  std::vector<double> b(rhs.values);

  const bool dirichlet_left =
      bc == BoundaryKind::Dirichlet || bc == BoundaryKind::RobinLeft;
  const bool dirichlet_right =
      bc == BoundaryKind::Dirichlet || bc == BoundaryKind::RobinRight;

  if (dirichlet_left) {
    diag[0] = 1.0;
    upper[0] = 0.0;
    b[0] = 0.0;
  } else {
    upper[0] = -2.0 / h2;
  }
  if (dirichlet_right) {
    diag[n - 1] = 1.0;
    lower[n - 2] = 0.0;
    b[n - 1] = 0.0;
  } else {
    lower[n - 2] = -2.0 / h2;
  }

  return SampledFunction(rhs.grid,
                         detail::thomas_solve(std::move(lower), std::move(diag),
                                              std::move(upper), std::move(b)));
}

/// Neuberger gradient: g = (I - Laplacian)^{-1} applied to the L2-gradient.
inline SampledFunction sobolev_gradient(const SampledFunction& l2grad,
                                        BoundaryKind bc) {
  return helmholtz_solve(l2grad, bc);
}

/// Discrete H1 inner product with central-difference derivatives.
inline double h1_inner(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g, "h1_inner");
  return l2_inner(f, g) +
         l2_inner(central_derivative(f), central_derivative(g));
}

/// Polak-Ribiere coefficient. L2H1 pairs Sobolev gradients with L2-gradients
/// through the L2 inner product; H1H1 uses the H1 inner product of the
/// Sobolev gradients alone. Negative values and zero denominators both
/// collapse to 0 (steepest-descent restart).
inline double pr_coefficient(const SampledFunction& g_new,
                             const SampledFunction& g_old,
                             const SampledFunction& l2_new,
                             const SampledFunction& l2_old, CgVariant variant) {
  double num = 0.0, den = 0.0;
  switch (variant) {
    case CgVariant::None:
      return 0.0;
    case CgVariant::L2H1:
      num = l2_inner(g_new - g_old, l2_new);
      den = l2_inner(g_old, l2_old);
      break;
    case CgVariant::H1H1:
      num = h1_inner(g_new - g_old, g_new);
      den = h1_inner(g_old, g_old);
      break;
  }
  if (den == 0.0) return 0.0;
  return std::max(num / den, 0.0);
}

/// h_{m+1} = g_{m+1} + gamma_m h_m.
inline SampledFunction next_direction(const SampledFunction& h_old,
                                      const SampledFunction& g_new,
                                      double gamma) {
  if (gamma == 0.0) return g_new;
  return g_new + gamma * h_old;
}

}  // namespace nderiv

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nderiv {

/// Uniform partition of [a, b] with n nodes, x_i = a + i*h.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  int n = 2;
  double h = 1.0;

  double node(int i) const { return a + i * h; }

  friend bool operator==(const Grid& p, const Grid& q) {
    return p.a == q.a && p.b == q.b && p.n == q.n;
  }
};

inline Grid make_uniform_grid(double a, double b, int n) {
  if (!(a < b))
    throw std::invalid_argument("make_uniform_grid: requires a < b, got a=" +
                                std::to_string(a) + " b=" + std::to_string(b));
  if (n < 3)
    throw std::invalid_argument("make_uniform_grid: requires n >= 3, got n=" +
                                std::to_string(n));
  Grid g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.h = (b - a) / (n - 1);
  return g;
}

/// Real values sampled on a Grid.
struct SampledFunction {
  Grid grid;
  std::vector<double> values;

  SampledFunction() = default;
  explicit SampledFunction(const Grid& g) : grid(g), values(g.n, 0.0) {}
  SampledFunction(const Grid& g, std::vector<double> v)
      : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != g.n)
      throw std::invalid_argument("SampledFunction: value count != grid.n");
  }

  double& operator[](int i) { return values[i]; }
  double operator[](int i) const { return values[i]; }
  int size() const { return grid.n; }
};

template <class F>
SampledFunction sample(const Grid& g, F&& f) {
  SampledFunction s(g);
  for (int i = 0; i < g.n; ++i) s[i] = f(g.node(i));
  return s;
}

inline void require_same_grid(const SampledFunction& f,
                              const SampledFunction& g, const char* where) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

// elementwise arithmetic, used heavily by the descent loop
inline SampledFunction operator+(const SampledFunction& f,
                                 const SampledFunction& g) {
  require_same_grid(f, g, "operator+");
  SampledFunction r(f.grid);
  for (int i = 0; i < r.size(); ++i) r[i] = f[i] + g[i];
  return r;
}

inline SampledFunction operator-(const SampledFunction& f,
                                 const SampledFunction& g) {
  require_same_grid(f, g, "operator-");
  SampledFunction r(f.grid);
  for (int i = 0; i < r.size(); ++i) r[i] = f[i] - g[i];
  return r;
}

inline SampledFunction operator*(double c, const SampledFunction& f) {
  SampledFunction r(f.grid);
  for (int i = 0; i < r.size(); ++i) r[i] = c * f[i];
  return r;
}

/// Trapezoid quadrature weight of node i.
inline double quad_weight(const Grid& g, int i) {
  return (i == 0 || i == g.n - 1) ? g.h / 2 : g.h;
}

/// F(x_i) = integral from a to x_i by composite trapezoid; F(a) = 0.
inline SampledFunction cumulative_integral(const SampledFunction& f) {
  SampledFunction F(f.grid);
  const double h = f.grid.h;
  for (int i = 1; i < f.size(); ++i)
    F[i] = F[i - 1] + h * (f[i - 1] + f[i]) / 2;
  return F;
}

inline double integral(const SampledFunction& f) {
  const double h = f.grid.h;
  double s = (f[0] + f[f.size() - 1]) / 2;
  for (int i = 1; i < f.size() - 1; ++i) s += f[i];
  return h * s;
}

inline double l2_inner(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g, "l2_inner");
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s += quad_weight(f.grid, i) * f[i] * g[i];
  return s;
}

inline double l2_norm(const SampledFunction& f) {
  double q = l2_inner(f, f);
  return q > 0 ? std::sqrt(q) : 0.0;
}

/// Second-order derivative by central differences, one-sided at the ends.
inline SampledFunction central_derivative(const SampledFunction& f) {
  const int n = f.size();
  const double h = f.grid.h;
  SampledFunction d(f.grid);
  d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2 * h);
  d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
  return d;
}

inline double h1_norm(const SampledFunction& f) {
  SampledFunction d = central_derivative(f);
  return std::sqrt(l2_inner(f, f) + l2_inner(d, d));
}

inline double relative_l2_error(const SampledFunction& estimate,
                                const SampledFunction& truth) {
  require_same_grid(estimate, truth, "relative_l2_error");
  double denom = l2_norm(truth);
  if (denom == 0.0)
    throw std::invalid_argument("relative_l2_error: truth has zero norm");
  return l2_norm(estimate - truth) / denom;
}

/// Transpose of the cumulative-integral matrix applied to v.
/// Row i of the matrix holds the trapezoid weights of [a, x_i], so the
/// transpose collapses to suffix sums.
inline SampledFunction cumulative_integral_transpose(const SampledFunction& v) {
  const int n = v.size();
  const double h = v.grid.h;
  std::vector<double> suffix(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + v[i];
  SampledFunction out(v.grid);
  out[0] = h / 2 * suffix[1];
  for (int j = 1; j < n; ++j) out[j] = h * suffix[j + 1] + h / 2 * v[j];
  return out;
}

}  // namespace nderiv

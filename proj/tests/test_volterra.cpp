#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "nderiv/grid.hpp"
#include "nderiv/volterra.hpp"
#include "test_support.hpp"

using namespace nderiv;
using test_support::dense_matrix;
using test_support::random_function;
using test_support::sup_diff;

TEST_CASE("apply_TD examples") {
  Grid g = make_uniform_grid(0, 1, 101);
  SampledFunction zero(g);
  for (double v : apply_TD(zero).values) CHECK(v == 0.0);

  SampledFunction one = sample(g, [](double) { return 1.0; });
  CHECK(sup_diff(apply_TD(one), [](double x) { return x; }) < 1e-13);

  Grid g3pi = make_uniform_grid(0, 3 * std::numbers::pi, 944);
  SampledFunction psi =
      sample(g3pi, [](double x) { return std::cos(x / 3) / 3; });
  CHECK(sup_diff(apply_TD(psi), [](double x) { return std::sin(x / 3); }) <
        1e-5);
  CHECK(apply_TD(psi)[0] == 0.0);
}

TEST_CASE("apply_TD_star examples") {
  Grid g = make_uniform_grid(0, 1, 101);
  SampledFunction zero(g);
  for (double v : apply_TD_star(zero).values) CHECK(v == 0.0);

  SampledFunction one = sample(g, [](double) { return 1.0; });
  CHECK(sup_diff(apply_TD_star(one), [](double x) { return 1 - x; }) < 1e-13);
  CHECK(apply_TD_star(one)[g.n - 1] == 0.0);

  Grid g3pi = make_uniform_grid(0, 3 * std::numbers::pi, 944);
  SampledFunction f =
      sample(g3pi, [](double x) { return std::cos(x / 3) / 3; });
  CHECK(sup_diff(apply_TD_star(f), [](double x) { return -std::sin(x / 3); }) <
        1e-5);

  // T_D f + T_D* f is exactly the constant integral(f)
  SampledFunction r = random_function(g, 3);
  SampledFunction s = apply_TD(r) + apply_TD_star(r);
  const double total = integral(r);
  for (int i = 0; i < g.n; ++i) CHECK(std::abs(s[i] - total) < 1e-14);
}

TEST_CASE("apply_T examples") {
  Grid g = make_uniform_grid(-2, 3, 101);
  SampledFunction one = sample(g, [](double) { return 1.0; });
  CHECK(sup_diff(apply_T(one), [&](double x) { return 2 * x - g.a - g.b; }) <
        1e-12);

  SampledFunction zero(g);
  for (double v : apply_T(zero).values) CHECK(v == 0.0);

  Grid g3pi = make_uniform_grid(0, 3 * std::numbers::pi, 944);
  SampledFunction psi =
      sample(g3pi, [](double x) { return std::cos(x / 3) / 3; });
  CHECK(sup_diff(apply_T(psi), [](double x) { return 2 * std::sin(x / 3); }) <
        2e-5);
}

TEST_CASE("apply_T_star is exactly -apply_T") {
  Grid g = make_uniform_grid(0, 1, 64);
  SampledFunction zero(g);
  for (double v : apply_T_star(zero).values) CHECK(v == 0.0);

  SampledFunction one = sample(g, [](double) { return 1.0; });
  CHECK(sup_diff(apply_T_star(one),
                 [&](double x) { return g.a + g.b - 2 * x; }) < 1e-12);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SampledFunction f = random_function(g, seed);
    SampledFunction sum = apply_T_star(f) + apply_T(f);
    for (double v : sum.values) CHECK(v == 0.0);
  }
}

// The trapezoid-weighted discretizations of T_D and T_D* are adjoint up to
// an exactly characterizable corner defect:
//   <T_D h, f>_w - <h, T_D* f>_w = (h^2/4) * (h_{n-1} f_{n-1} - h_0 f_0).
// The defect vanishes identically on functions vanishing at the endpoints;
// its size (O(h^2) on a single corner product) is the quadrature tolerance
// of the scheme. We assert the closed form exactly via dense matrices.
TEST_CASE("discrete adjointness of (T_D, T_D*) up to the exact corner defect") {
  for (int n : {10, 23, 50}) {
    Grid g = make_uniform_grid(-0.3, 1.1, n);
    auto A = dense_matrix(g, [](const SampledFunction& v) { return apply_TD(v); });
    auto B = dense_matrix(g, [](const SampledFunction& v) { return apply_TD_star(v); });
    const double corner = g.h * g.h / 4;

    // defect matrix D = A^T W - W B, W = diag(trapezoid weights)
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double d = A[j][i] * quad_weight(g, j) - quad_weight(g, i) * B[i][j];
        double expected = 0.0;
        if (i == 0 && j == 0) expected = -corner;
        if (i == n - 1 && j == n - 1) expected = corner;
        CHECK(std::abs(d - expected) < 1e-14);
      }
    }

    // scalar form of the same statement on random inputs
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      SampledFunction hfun = random_function(g, seed);
      SampledFunction ffun = random_function(g, seed + 50);
      const double lhs = l2_inner(apply_TD(hfun), ffun);
      const double rhs = l2_inner(hfun, apply_TD_star(ffun));
      const double defect =
          corner * (hfun[n - 1] * ffun[n - 1] - hfun[0] * ffun[0]);
      CHECK(std::abs(lhs - rhs - defect) < 1e-13);

      // exact adjointness on endpoint-vanishing inputs
      hfun[0] = hfun[n - 1] = 0.0;
      ffun[0] = ffun[n - 1] = 0.0;
      CHECK(std::abs(l2_inner(apply_TD(hfun), ffun) -
                     l2_inner(hfun, apply_TD_star(ffun))) < 1e-13);
    }
  }
}

TEST_CASE("T* = -T via dense matrices on n <= 50") {
  for (int n : {7, 31, 50}) {
    Grid g = make_uniform_grid(0, 2, n);
    auto T = dense_matrix(g, [](const SampledFunction& v) { return apply_T(v); });
    auto Ts = dense_matrix(g, [](const SampledFunction& v) { return apply_T_star(v); });
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(Ts[i][j] == -T[i][j]);
  }
}

TEST_CASE("apply_T_transpose matches the dense transpose") {
  Grid g = make_uniform_grid(0.2, 1.7, 33);
  auto T = dense_matrix(g, [](const SampledFunction& v) { return apply_T(v); });
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SampledFunction v = random_function(g, seed);
    SampledFunction tv = apply_T_transpose(v);
    for (int j = 0; j < g.n; ++j) {
      double expected = 0.0;
      for (int i = 0; i < g.n; ++i) expected += T[i][j] * v[i];
      CHECK(tv[j] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: boundedness ||T psi|| <= 2(b-a)||psi||") {
  Grid g = make_uniform_grid(-1, 1.5, 83);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SampledFunction psi = random_function(g, seed);
    CHECK(l2_norm(apply_T(psi)) <=
          2 * (g.b - g.a) * l2_norm(psi) * (1 + 1e-12));
  }
}

// Kernel triviality "up to quadrature tolerance": the dense matrix of T has
// a one-dimensional null space spanned by the grid-scale alternating mode
// (+1,-1,+1,...), which the trapezoid rule cannot distinguish from zero.
// Every direction resolvable on the grid is bounded away from the kernel.
TEST_CASE("kernel of T is only the unresolvable alternating mode") {
  const int n = 20;
  Grid g = make_uniform_grid(0, 1, n);
  auto Tdense = dense_matrix(g, [](const SampledFunction& v) { return apply_T(v); });
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = Tdense[i][j];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  CHECK(sv(n - 1) < 1e-12);         // the alternating mode
  CHECK(sv(n - 2) > 1e-3 * g.h);    // everything else is well separated

  Eigen::VectorXd null = svd.matrixV().col(n - 1);
  null /= null(0);
  for (int i = 0; i < n; ++i)
    CHECK(null(i) == doctest::Approx(i % 2 == 0 ? 1.0 : -1.0).epsilon(1e-10));

  // least-norm solve: a smooth psi is recovered from T psi up to the
  // alternating component, i.e. T psi = 0 forces psi = 0 for resolvable psi
  SampledFunction psi = sample(g, [](double x) { return x * x - 0.3 * x; });
  Eigen::VectorXd pv(n), alt(n);
  for (int i = 0; i < n; ++i) {
    pv(i) = psi[i];
    alt(i) = (i % 2 == 0) ? 1.0 : -1.0;
  }
  Eigen::VectorXd rhs = M * pv;
  Eigen::VectorXd least_norm =
      svd.solve(rhs);  // JacobiSVD solve is the pseudoinverse solution
  Eigen::VectorXd expected = pv - (pv.dot(alt) / alt.dot(alt)) * alt;
  CHECK((least_norm - expected).norm() < 1e-10 * (1 + expected.norm()));
}

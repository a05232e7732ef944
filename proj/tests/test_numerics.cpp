#include <doctest.h>

#include <cmath>

#include "darboux/fields.hpp"
#include "test_helpers.hpp"

using namespace dbx;
using dbxtest::small_grid;

TEST_CASE("grid construction enforces its invariants") {
  const Grid g = Grid::make(10.0, 257, {0.0, 1.0});
  CHECK(g.z_nodes.size() == 257);
  CHECK(g.z_nodes[128] == 0.0);
  CHECK(g.z_nodes.front() == -10.0);
  CHECK(g.z_nodes.back() == 10.0);
  CHECK(g.x_at(128, 2.0) == 0.0);

  CHECK_THROWS_AS((void)Grid::make(5.0, 257), std::invalid_argument);    // z_max too small
  CHECK_THROWS_AS((void)Grid::make(10.0, 129), std::invalid_argument);   // too few nodes
  CHECK_THROWS_AS((void)Grid::make(10.0, 258), std::invalid_argument);   // even count
  CHECK_THROWS_AS((void)Grid::make(10.0, 257, {}), std::invalid_argument);
}

TEST_CASE("inner products of the free basis") {
  QuadratureRule rule;
  rule.convergence_tol = 1e-8;
  const ClosedFormField psi0 = fields::psi_basis(0);
  const ClosedFormField psi1 = fields::psi_basis(1);
  CHECK(std::abs(inner_product(psi0, psi0, 0.0, small_grid(), rule) - 1.0) <= 1e-8);
  CHECK(std::abs(inner_product(psi0, psi1, 0.0, small_grid(), rule)) <= 1e-9);
}

TEST_CASE("transformed-state norms reproduce the (n+m+1) ratio by quadrature") {
  const int m = 2;
  const FirstOrderOp L = build_operator(fields::u_transform(m), small_grid(), [](double t) {
    const TScalar tv = t_variable(t);
    return sqrt(1.0 + tv * tv);
  });
  QuadratureRule rule;
  for (int n : {0, 1, 4}) {
    const ClosedFormField psi = fields::psi_basis(n);
    const ClosedFormField lpsi = apply(L, psi);
    const Complex ratio = inner_product(lpsi, lpsi, 0.0, small_grid(), rule) /
                          inner_product(psi, psi, 0.0, small_grid(), rule);
    CHECK(std::abs(ratio - double(n + m + 1)) <= 1e-6);
  }
}

TEST_CASE("inner product refuses non-decaying integrands with a diagnostic") {
  const ClosedFormField u2 = fields::u_transform(2);
  CHECK_THROWS_WITH_AS((void)inner_product(u2, u2, 0.0, small_grid()),
                       doctest::Contains("does not decay"), std::runtime_error);
}

TEST_CASE("quadrature carries its own half-resolution convergence certificate") {
  const ClosedFormField psi3 = fields::psi_basis(3);
  const IntegralResult r = integrate(
      [&](double x) { return std::norm(psi3.value(x, 0.5)); }, 0.5, small_grid(), {}, "norm(psi3)");
  CHECK(r.gap() <= 1e-10);
  CHECK(std::abs(r.value - 1.0) <= 1e-8);
}

TEST_CASE("schrodinger_residual passes exact solutions and catches a wrong potential") {
  const ClosedFormField psi2 = fields::psi_basis(2);
  CHECK(schrodinger_residual(psi2, zero_potential(), small_grid(), 1e-9).passed);

  const ClosedFormField phi1 = fields::phi_state(1, 2);
  CHECK(schrodinger_residual(phi1, fields::potential_v1(2), small_grid(), 1e-8).passed);

  // negative control: V1 with m off by two must fail loudly
  const ResidualReport wrong = schrodinger_residual(phi1, fields::potential_v1(0), small_grid(), 1e-8);
  CHECK(!wrong.passed);
  CHECK(wrong.max_norm > 1e-2);
}

TEST_CASE("gram matrix of the free basis is the identity and is hermitian") {
  std::vector<ClosedFormField> basis;
  for (int n = 0; n <= 5; ++n) basis.push_back(fields::psi_basis(n));
  QuadratureRule rule;
  rule.convergence_tol = 1e-7;
  const auto g = gram_matrix(basis, 0.0, small_grid(), rule);
  for (size_t j = 0; j < basis.size(); ++j) {
    for (size_t k = 0; k < basis.size(); ++k) {
      CHECK(std::abs(g[j][k] - ((j == k) ? Complex(1.0) : Complex(0.0))) <= 1e-7);
      CHECK(std::abs(g[j][k] - std::conj(g[k][j])) <= 1e-9);
    }
  }
  // single-function case
  const auto g1 = gram_matrix(std::span<const ClosedFormField>(basis.data(), 1), 1.5, small_grid(), rule);
  CHECK(g1.size() == 1);
  CHECK(std::abs(g1[0][0] - 1.0) <= 1e-8);
}

TEST_CASE("fd_check observes second-order convergence of the analytic tower") {
  const FdReport r = fd_check(fields::psi_basis(3), small_grid());
  CHECK(r.passed);
  CHECK(r.order_dx >= 1.9);
  CHECK(r.order_dxx >= 1.9);
  CHECK(r.order_dt >= 1.9);

  const ClosedFormField constant{"const", [](double, double, int order) {
                                   return Jet::constant(Complex(2.0, -1.0), order);
                                 }};
  CHECK(fd_check(constant, small_grid()).passed);
  CHECK(fd_check(constant, small_grid()).max_rel_err <= 1e-13);

  // growing transformation function, including its t-derivative at t = 0
  CHECK(fd_check(fields::u_transform(2), small_grid()).passed);
}

TEST_CASE("nodelessness evidence") {
  CHECK(nodelessness(fields::u_transform(2), small_grid()).passed);
  const NodelessnessReport psi1 = nodelessness(fields::psi_basis(1), small_grid());
  CHECK(!psi1.passed);  // node at x = 0
  CHECK(std::abs(psi1.worst_x) <= 1e-12);

  const ClosedFormField poly{"f03-factor", [](double x, double t, int order) {
                               const Jet z = scaled_coordinate_jet(x, t, order);
                               return (z * z + TScalar(1.0)) * TScalar(-3.0 * kI);
                             }};
  CHECK(nodelessness(poly, small_grid()).passed);
}

TEST_CASE("residual reports are deterministic for a fixed grid") {
  const ClosedFormField chi2 = fields::chi_state(2, 0, 1);
  const PotentialField v2 = fields::potential_v2(0, 1);
  const ResidualReport a = schrodinger_residual(chi2, v2, small_grid(), 1e-8);
  const ResidualReport b = schrodinger_residual(chi2, v2, small_grid(), 1e-8);
  CHECK(a.max_norm == b.max_norm);
  CHECK(a.l2_norm == b.l2_norm);
  CHECK(a.worst_x == b.worst_x);
  CHECK(a.worst_t == b.worst_t);
}

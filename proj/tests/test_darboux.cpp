#include <doctest.h>

#include <cmath>

#include "darboux/darboux.hpp"
#include "darboux/fields.hpp"
#include "darboux/specfun.hpp"
#include "test_helpers.hpp"

using namespace dbx;
using dbxtest::close;
using dbxtest::small_grid;

namespace {

TimeFactor sqrt_one_t2 = [](double t) {
  const TScalar tv = t_variable(t);
  return sqrt(1.0 + tv * tv);
};

double kernel_norm(const ClosedFormField& f, const ClosedFormField& ref) {
  double worst = 0.0;
  for (double t : small_grid().t_samples)
    for (double z : small_grid().z_nodes) {
      const double x = z * small_grid().scale(t);
      worst = std::max(worst, std::abs(f.value(x, t)) / (1.0 + std::abs(ref.value(x, t))));
    }
  return worst;
}

}  // namespace

TEST_CASE("build_operator: action at t = 0 and kernel property") {
  const ClosedFormField u0 = fields::u_transform(0);
  const FirstOrderOp L = build_operator(u0, small_grid(), sqrt_one_t2);

  // at t = 0 the operator acts as f -> f_x - (x/2) f
  const ClosedFormField probe = fields::psi_basis(2);
  const ClosedFormField Lprobe = apply(L, probe);
  for (double x : {-1.7, 0.0, 2.3}) {
    const Jet j = probe.jet(x, 0.0, 1);
    CHECK(close(Lprobe.value(x, 0.0), j.deriv(1).v - 0.5 * x * j.value(), 1e-12));
  }

  for (int m : {0, 2, 4}) {
    const ClosedFormField u = fields::u_transform(m);
    const FirstOrderOp Lm = build_operator(u, small_grid(), sqrt_one_t2);
    CHECK(kernel_norm(apply(Lm, u), u) <= 1e-10);
  }
}

TEST_CASE("build_operator matches the closed-form first-step operator") {
  const int m = 2;
  const ClosedFormField u = fields::u_transform(m);
  const FirstOrderOp L = build_operator(u, small_grid(), sqrt_one_t2);
  const ClosedFormField psi = fields::psi_basis(3);
  const ClosedFormField Lpsi = apply(L, psi);

  double worst = 0.0;
  for (double t : small_grid().t_samples) {
    for (double z : small_grid().z_nodes) {
      const double x = z * small_grid().scale(t);
      const Jet j = psi.jet(x, t, 1);
      const Complex he_ratio =
          specfun::hermite_eval(m - 1, kI * z) / specfun::hermite_eval(m, kI * z);
      const Complex closed = std::sqrt(1.0 + t * t) * j.deriv(1).v -
                             (0.5 * x * rotation_phase(1.0, t).v + kI * double(m) * he_ratio) * j.value();
      worst = std::max(worst, std::abs(Lpsi.value(x, t) - closed));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("numeric time factor reproduces the closed form") {
  const ClosedFormField u2 = fields::u_transform(2);
  const FirstOrderOp L = build_operator(u2, small_grid());  // no closed form supplied
  for (double t : {0.0, 0.5, 1.0, -2.0}) {
    CHECK(std::abs(L.time_factor(t).v - std::sqrt(1.0 + t * t)) <= 1e-8);
  }
  // the t-derivative comes from the integrand itself
  CHECK(std::abs(L.time_factor(1.0).dt - 1.0 / std::sqrt(2.0)) <= 1e-8);
}

TEST_CASE("apply: transformed basis states and adjoint kernel") {
  const int m = 2;
  const ClosedFormField u = fields::u_transform(m);
  const FirstOrderOp L = build_operator(u, small_grid(), sqrt_one_t2);

  for (int n : {0, 1, 3}) {
    const ClosedFormField Lpsi = apply(L, fields::psi_basis(n));
    const ClosedFormField phi = fields::phi_state(n + 1, m);
    const Complex c = Lpsi.value(0.41, 0.6) / phi.value(0.41, 0.6);
    CHECK(std::abs(std::abs(c) - std::sqrt(double(n + m + 1))) <= 1e-10);
    CHECK(dbxtest::field_diff(Lpsi, scaled_field(c, phi)) <= 1e-8);
  }

  const ClosedFormField v = kernel_partner(L);
  CHECK(kernel_norm(apply(L.adjoint_op(), v), v) <= 1e-9);
}

TEST_CASE("kernel partner is the ground state of the transformed equation") {
  const int m = 2;
  const FirstOrderOp L = build_operator(fields::u_transform(m), small_grid(), sqrt_one_t2);
  const ClosedFormField v = kernel_partner(L);
  CHECK(schrodinger_residual(v, fields::potential_v1(m), small_grid(), 1e-8).passed);

  // proportional to the normalized level-1 ground state
  const ClosedFormField phi0 = fields::phi_state(0, m);
  const Complex c = v.value(0.2, -0.4) / phi0.value(0.2, -0.4);
  CHECK(dbxtest::field_diff(v, scaled_field(c, phi0)) <= 1e-9);
}

TEST_CASE("potential_difference examples and finite-difference oracle") {
  const ClosedFormField u0 = fields::u_transform(0);
  for (double t : {0.0, 0.7, -2.0})
    for (double x : {-1.0, 0.4}) CHECK(close(potential_difference(u0, x, t), -1.0 / (1.0 + t * t), 1e-12));

  const ClosedFormField u2 = fields::u_transform(2);
  CHECK(close(potential_difference(u2, 0.0, 0.0), -5.0, 1e-12));

  // central finite difference of -log|u|^2
  const double x = 0.9, t = 0.3, h = 1e-4;
  const auto loga = [&](double xx) { return -std::log(std::norm(u2.value(xx, t))); };
  const double fd = (loga(x + h) - 2.0 * loga(x) + loga(x - h)) / (h * h);
  CHECK(std::abs(potential_difference(u2, x, t) - fd) <= 1e-6);
}

TEST_CASE("check_reality: compliant, violating and mixed inputs") {
  for (int m : {0, 2}) {
    const RealityReport r = check_reality(fields::u_transform(m), small_grid(), 1e-10);
    CHECK(r.passed);
    CHECK(r.max_spread <= 1e-10);
  }
  const RealityReport rv = check_reality(fields::v_partner(2, 3), small_grid(), 1e-10);
  CHECK(rv.passed);

  const ClosedFormField cubic{"exp(ix^3)", [](double x, double t, int order) {
                                const Jet X = Jet::variable(x, order);
                                (void)t;
                                return exp(X * X * X * TScalar(kI));
                              }};
  const RealityReport rc = check_reality(cubic, small_grid(), 1e-10);
  CHECK(!rc.passed);
  CHECK(rc.max_spread > 1.0);

  // a mixture is simply measured; the report itself decides
  const ClosedFormField mix = add_fields(fields::psi_basis(0), fields::psi_basis(2));
  const RealityReport rm = check_reality(mix, small_grid(), 1e-10);
  CHECK(rm.max_spread >= 0.0);
  CHECK(rm.tolerance == 1e-10);
}

TEST_CASE("build_operator rejects inputs with nodes or complex phases") {
  CHECK_THROWS_AS((void)build_operator(fields::psi_basis(1), small_grid()), std::invalid_argument);
  const ClosedFormField cubic{"exp(ix^3)", [](double x, double, int order) {
                                const Jet X = Jet::variable(x, order);
                                return exp(X * X * X * TScalar(kI));
                              }};
  CHECK_THROWS_AS((void)build_operator(cubic, small_grid()), std::invalid_argument);
}

TEST_CASE("adjointness under the scalar product") {
  const FirstOrderOp L = build_operator(fields::u_transform(2), small_grid(), sqrt_one_t2);
  QuadratureRule rule;
  const ClosedFormField f = fields::psi_basis(1);
  const ClosedFormField g = fields::psi_basis(3);
  for (double t : {0.0, 1.5}) {
    const Complex lhs = inner_product(apply(L, f), g, t, small_grid(), rule);
    const Complex rhs = inner_product(f, apply(L.adjoint_op(), g), t, small_grid(), rule);
    CHECK(std::abs(lhs - rhs) <= 1e-7);
  }
}

TEST_CASE("intertwining and the symmetry product L+L") {
  const int m = 2;
  const FirstOrderOp L = build_operator(fields::u_transform(m), small_grid(), sqrt_one_t2);
  const PotentialField v1 = fields::potential_v1(m);
  for (int n = 0; n <= 6; ++n) {
    const ClosedFormField psi = fields::psi_basis(n);
    CHECK(schrodinger_residual(apply(L, psi), v1, small_grid(), 1e-8).passed);
    const ClosedFormField LL = apply(L.adjoint_op(), apply(L, psi));
    CHECK(dbxtest::field_diff(LL, scaled_field(double(n + m + 1), psi)) <= 1e-8);
  }
}

TEST_CASE("node proximity during application is a structured error") {
  const FirstOrderOp L = build_operator(fields::u_transform(0), small_grid(), sqrt_one_t2);
  FirstOrderOp bad = L;
  bad.source = fields::psi_basis(1);  // node at x = 0
  const ClosedFormField f = fields::psi_basis(0);
  const ClosedFormField g = apply(bad, f);
  CHECK_THROWS_AS((void)g.value(0.0, 0.0), NodeProximityError);
}

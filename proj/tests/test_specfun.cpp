#include <doctest.h>

#include <cmath>
#include <random>

#include "darboux/specfun.hpp"

using namespace dbx;
using namespace dbx::specfun;

namespace {
bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }
}  // namespace

TEST_CASE("hermite_eval on frozen low-degree values") {
  CHECK(close(hermite_eval(0, Complex(3.0, 2.0)), 1.0));
  CHECK(close(hermite_eval(2, kI), Complex(-2.0, 0.0)));   // w^2 - 1 at w = i
  CHECK(close(hermite_eval(3, 2.0), 2.0));                 // w^3 - 3w at w = 2
  CHECK(close(hermite_eval(1, Complex(0.5, -1.0)), Complex(0.5, -1.0)));
  CHECK(close(hermite_eval(4, 0.0), 3.0));                 // w^4 - 6w^2 + 3
}

TEST_CASE("hermite recurrence residual stays small for random complex arguments") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> mag(-6.0, 6.0);
  for (int m = 0; m <= 12; ++m) {
    for (int trial = 0; trial < 100; ++trial) {
      const Complex w(mag(rng), mag(rng));
      const Complex he = hermite_eval(m, w);
      const Complex d1 = hermite_derivative(m, w);
      const Complex d2 = (m >= 1) ? double(m) * hermite_derivative(m - 1, w) : Complex{};
      const Complex residual = d2 - w * d1 + double(m) * he;
      CHECK(std::abs(residual) <= 1e-9 * (1.0 + std::abs(he)));
    }
  }
}

TEST_CASE("hermite_derivative equals the degree-lowering identity and a finite difference") {
  CHECK(close(hermite_derivative(0, 5.0), 0.0));
  CHECK(close(hermite_derivative(2, 3.0), 6.0));  // 2 He_1(3)
  const Complex w(1.3, -0.4);
  const double h = 1e-5;
  const Complex fd = (hermite_eval(4, w + h) - hermite_eval(4, w - h)) / (2.0 * h);
  CHECK(close(hermite_derivative(4, w), fd, 1e-8));
}

TEST_CASE("even-degree He_m(iz) is real and nodeless on the real line") {
  for (int m : {0, 2, 4, 6, 8}) {
    const double im = (m % 4 == 0) ? 1.0 : -1.0;  // i^{-m} for even m
    for (double z = -10.0; z <= 10.0; z += 0.37) {
      const Complex val = hermite_eval(m, kI * z);
      CHECK(std::abs(val.imag()) <= 1e-12 * (1.0 + std::abs(val)));
      CHECK(std::abs(val) > 0.5);  // no real zeros; |He_m(iz)| >= |He_m(0)| scale
      (void)im;
    }
  }
}

TEST_CASE("f_ml frozen values") {
  SUBCASE("m=0, l=1 is the constant i") {
    for (double z : {-3.0, 0.0, 0.7, 9.0}) {
      const FmlValue f = f_ml(0, 1, z);
      CHECK(close(f.value, kI));
      CHECK(close(f.d1, 0.0));
      CHECK(close(f.d2, 0.0));
    }
  }
  SUBCASE("m=0, l=3 equals -3i(z^2+1)") {
    const FmlValue f = f_ml(0, 3, 1.0);
    CHECK(close(f.value, -6.0 * kI));
    CHECK(close(f.d1, -6.0 * kI));  // -6iz at z=1
    CHECK(close(f.d2, -6.0 * kI));
  }
}

TEST_CASE("f_ml derivatives agree with finite differences") {
  const Complex z(0.8, 0.0);
  const double h = 1e-5;
  for (auto [m, l] : {std::pair{0, 3}, {2, 3}, {2, 5}, {4, 7}}) {
    const FmlValue f = f_ml(m, l, z);
    const Complex fd1 = (f_ml(m, l, z + h).value - f_ml(m, l, z - h).value) / (2.0 * h);
    const Complex fd2 = (f_ml(m, l, z + h).value - 2.0 * f.value + f_ml(m, l, z - h).value) / (h * h);
    CHECK(close(f.d1, fd1, 1e-8));
    CHECK(close(f.d2, fd2, 1e-5));
  }
}

TEST_CASE("f_ml is nodeless on the real grid for valid index pairs") {
  for (auto [m, l] : {std::pair{0, 1}, {0, 3}, {2, 3}, {2, 5}, {4, 5}}) {
    double min_abs = 1e300;
    for (double z = -10.0; z <= 10.0; z += 0.01) min_abs = std::min(min_abs, std::abs(f_ml(m, l, z).value));
    CHECK(min_abs > 0.1);
  }
}

TEST_CASE("invalid degrees and index parities are rejected") {
  CHECK_THROWS_AS((void)hermite_eval(-1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)hermite_eval(kMaxDegree + 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)f_ml(1, 2, 0.0), std::invalid_argument);  // odd m
  CHECK_THROWS_AS((void)f_ml(0, 2, 0.0), std::invalid_argument);  // wrong parity of l - m
  CHECK_THROWS_AS((void)f_ml(2, 1, 0.0), std::invalid_argument);  // l <= m
}

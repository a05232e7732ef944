#include "darboux/specfun.hpp"

#include <stdexcept>
#include <string>

namespace dbx::specfun {

void validate_degree(int m) {
  if (m < 0) throw std::invalid_argument("Hermite degree must be non-negative, got " + std::to_string(m));
  if (m > kMaxDegree)
    throw std::invalid_argument("Hermite degree " + std::to_string(m) + " exceeds supported maximum " +
                                std::to_string(kMaxDegree));
}

Complex hermite_eval(int m, Complex w) {
  validate_degree(m);
  if (m == 0) return 1.0;
  Complex prev = 1.0;
  Complex cur = w;
  for (int k = 1; k < m; ++k) {
    const Complex next = w * cur - double(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Complex hermite_derivative(int m, Complex w) {
  validate_degree(m);
  if (m == 0) return 0.0;
  return double(m) * hermite_eval(m - 1, w);
}

Jet hermite_jet(int m, const Jet& w) {
  validate_degree(m);
  if (m == 0) return Jet::constant(1.0, w.order());
  Jet prev = Jet::constant(1.0, w.order());
  Jet cur = w;
  for (int k = 1; k < m; ++k) {
    Jet next = w * cur - prev * TScalar(double(k));
    prev = cur;
    cur = next;
  }
  return cur;
}

void validate_fml_indices(int m, int l) {
  if (m < 0 || m % 2 != 0)
    throw std::invalid_argument("f_ml requires even m >= 0, got m = " + std::to_string(m));
  if (l <= m || (l - m) % 2 != 1)
    throw std::invalid_argument("f_ml requires l in {m+1, m+3, ...}, got (m, l) = (" + std::to_string(m) +
                                ", " + std::to_string(l) + ")");
  validate_degree(l + 1);
}

Jet f_ml_jet(int m, int l, const Jet& z) {
  const Jet w = z * TScalar(kI);
  return (hermite_jet(l, w) * hermite_jet(m + 1, w) - hermite_jet(m, w) * hermite_jet(l + 1, w)) * TScalar(kI);
}

FmlValue f_ml(int m, int l, Complex z) {
  validate_fml_indices(m, l);
  const Jet j = f_ml_jet(m, l, Jet::variable(z, 2));
  FmlValue r;
  r.m = m;
  r.l = l;
  r.z = z;
  r.value = j.deriv(0).v;
  r.d1 = j.deriv(1).v;
  r.d2 = j.deriv(2).v;
  return r;
}

}  // namespace dbx::specfun

#pragma once

#include "darboux/jet.hpp"

namespace dbx::specfun {

/// Degrees above this are rejected: the upward recurrence is accurate for the
/// moderate degrees this library needs and overflow regimes are avoided.
inline constexpr int kMaxDegree = 64;

void validate_degree(int m);

/// Probabilists' Hermite polynomial He_m(w) by the upward three-term
/// recurrence He_{k+1} = w He_k - k He_{k-1}, He_0 = 1, He_1 = w.
Complex hermite_eval(int m, Complex w);

/// He_m'(w) = m He_{m-1}(w).
Complex hermite_derivative(int m, Complex w);

/// He_m evaluated on a jet argument (exact polynomial arithmetic).
Jet hermite_jet(int m, const Jet& w);

/// f_{m,l}(z) = i [He_l(iz) He_{m+1}(iz) - He_m(iz) He_{l+1}(iz)] with its
/// first two z-derivatives.
struct FmlValue {
  int m = 0;
  int l = 0;
  Complex z{};
  Complex value{};
  Complex d1{};
  Complex d2{};
};

/// Requires m even and l in {m+1, m+3, ...}; throws std::invalid_argument.
void validate_fml_indices(int m, int l);

FmlValue f_ml(int m, int l, Complex z);

/// f_{m,l} on a jet argument z (all derivatives through the iz chain rule).
Jet f_ml_jet(int m, int l, const Jet& z);

}  // namespace dbx::specfun

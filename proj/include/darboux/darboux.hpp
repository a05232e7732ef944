#pragma once

#include <functional>
#include <optional>
#include <string>

#include "darboux/field.hpp"
#include "darboux/numerics.hpp"

namespace dbx {

/// Real time factor of a transformation operator, with analytic t-derivative.
using TimeFactor = std::function<TScalar(double t)>;

struct RealityReport {
  double max_spread = 0.0;  // x-variation of d_xx arg u, worst over t
  double tolerance = 0.0;
  bool passed = false;
  double worst_t = 0.0;
};

/// First-order transformation operator L = L1(t) [d_x - u_x/u] built from a
/// transformation function u; the adjoint acts as -L1(t) [conj(u_x/u) + d_x].
struct FirstOrderOp {
  TimeFactor time_factor;
  ClosedFormField source;
  bool adjoint = false;

  FirstOrderOp adjoint_op() const {
    FirstOrderOp r = *this;
    r.adjoint = !r.adjoint;
    return r;
  }
};

/// x-variation of Im d_xx log u across the grid; the transformation produces
/// a real potential iff this vanishes.
RealityReport check_reality(const ClosedFormField& u, const Grid& grid, double tolerance = 1e-10);

/// Builds the operator after validating nodelessness and the reality
/// condition on the grid.  When no closed-form time factor is supplied it is
/// computed as exp(2 int_0^t Im d_xx log u) by adaptive trapezoid, with the
/// integrand sampled at a fixed reference z (x-independent by the reality
/// condition) and L1(0) = 1.
FirstOrderOp build_operator(const ClosedFormField& u, const Grid& grid,
                            TimeFactor closed_form_time_factor = nullptr, double reality_tol = 1e-10,
                            double node_threshold = 1e-10);

/// Applies the operator; the result field serves jets up to the source
/// field's tower depth minus one.
ClosedFormField apply(const FirstOrderOp& op, const ClosedFormField& f);

/// A_{0,1} = -d_xx log |u|^2 = -2 Re(u_xx/u - (u_x/u)^2).
double potential_difference(const ClosedFormField& u, double x, double t);
Jet potential_difference_jet(const ClosedFormField& u, double x, double t, int order);

/// v = 1 / (L1(t) u^*): the kernel of the adjoint operator and the ground
/// state of the transformed equation.
ClosedFormField kernel_partner(const FirstOrderOp& op);

/// Numeric time-factor route shared with N-step chains; values are memoized
/// per t (the integrand is re-evaluated through `log_ddx_imag`).
TimeFactor numeric_time_factor(std::function<double(double t)> log_ddx_imag, double tol = 1e-10);

/// Guard used before jet divisions by u.
void require_off_node(const Jet& u, double x, double t, const std::string& label);

}  // namespace dbx

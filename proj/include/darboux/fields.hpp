#pragma once

#include "darboux/field.hpp"

namespace dbx::fields {

/// Validates the transformation-function indices of the free-particle model:
/// m even and non-negative, l in {m+1, m+3, ...}.
void validate_model_indices(int m, int l);

/// Normalized discrete-basis solution of the free equation,
///   psi_n = (2pi)^{-1/4} (n!)^{-1/2} (1+t^2)^{-1/4}
///           exp[i x^2 t/(4+4t^2) - i(n+1/2) arctan t] e^{-z^2/4} He_n(z).
ClosedFormField psi_basis(int n);

/// Symmetry-operator eigenfunction with eigenvalue i(k+1/2); grows like
/// e^{z^2/4} and lies outside the Hilbert space.  Nodeless only for even k.
ClosedFormField u_eigenfunction(int k);

/// The single-step transformation function u_m; odd m is rejected (those
/// functions vanish at x = 0 and give singular potentials).
ClosedFormField u_transform(int m);

/// Second-step transformation function
///   v_l = (1-it)^{-1/2} exp[x^2/(4-4it) + i l arctan t] f_{ml}(z)/He_m(iz).
ClosedFormField v_partner(int m, int l);

/// Eigenbasis of the once-transformed equation: index 0 is the kernel-partner
/// state, index k >= 1 the transformed psi_{k-1}.
ClosedFormField phi_state(int k, int m);

/// Eigenbasis of the twice-transformed equation: indices 0 and 1 are the two
/// unpaired states, index k >= 2 is assembled from the Wronskian-ratio
/// expression over (psi_{k-2}, u_m, u_l); it matches the normalized operator
/// image of phi_{k-1} up to a constant unit phase.
ClosedFormField chi_state(int k, int m, int l);

PotentialField potential_v1(int m);
PotentialField potential_v2(int m, int l);

/// Closed form of the 2x2 Wronskian of (u_m, u_l):
///   ((1-it) sqrt(1+t^2))^{-1} f_{ml}(z) exp[x^2/(2-2it) + i(m+l) arctan t].
ClosedFormField wronskian_uu_closed_form(int m, int l);

/// Symmetry operator of level p: acts as g0 - i * shift, where shift is the
/// accumulated L1^2(t) * potential difference (null at level 0) and
///   g0 = i(1+t^2) d_xx + t x d_x + t/2 - i x^2/4.
struct SymmetryOp {
  int level = 0;
  JetEval shift;  // L1^2(t) * A_{0,p}; null for level 0
};

SymmetryOp symmetry_op(int level, int m, int l);
SymmetryOp symmetry_from_shift(int level, JetEval shift);

/// g0 applied to a jet of order k+2; the result has order k.
Jet g0_apply(const Jet& f, double x, double t);

Jet apply_symmetry_jet(const SymmetryOp& op, const JetEval& f, double x, double t, int order);
Complex apply_symmetry(const SymmetryOp& op, const ClosedFormField& f, double x, double t);
ClosedFormField apply_symmetry_field(const SymmetryOp& op, const ClosedFormField& f);

}  // namespace dbx::fields

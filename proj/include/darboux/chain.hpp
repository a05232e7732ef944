#pragma once

#include <span>
#include <string>
#include <vector>

#include "darboux/darboux.hpp"
#include "darboux/fields.hpp"

namespace dbx {

/// An ordered chain of transformation functions, all eigenfunctions of the
/// same base symmetry operator: i g^(0) u_k = alpha_k u_k with strictly
/// decreasing alpha.  Certification populates the per-step machinery.
struct ChainSpec {
  std::vector<ClosedFormField> transformation_functions;
  std::vector<double> alphas;
  fields::SymmetryOp base_symmetry{};  // level-0 symmetry; default is the free-particle one

  std::vector<FirstOrderOp> step_operators;   // set by certification
  std::vector<ClosedFormField> step_sources;  // sigma_p = W_p / W_{p-1}
  std::vector<TimeFactor> step_time_factors;
  bool certified = false;

  int size() const { return int(transformation_functions.size()); }
};

/// Wronskian determinant of the given fields (rows are x-derivative orders).
Complex wronskian(std::span<const ClosedFormField> fields, double x, double t);
Jet wronskian_jet(std::span<const ClosedFormField> fields, double x, double t, int order);
ClosedFormField wronskian_field(std::vector<ClosedFormField> fields, std::string label = "");

/// sigma_p = W(u_1..u_p) / W(u_1..u_{p-1}), the transformation function of
/// step p reconstructed from the chain (p is 1-based).
ClosedFormField prefix_ratio_field(const ChainSpec& spec, int p);

/// Nth-order transformation operator: either the Wronskian determinant form
/// or, when the chain is completely reducible, the composition of its steps.
struct NthOrderOp {
  int order = 1;
  std::vector<ClosedFormField> funcs;
  TimeFactor time_factor;
  std::vector<FirstOrderOp> steps;  // empty unless built from a certified chain
  bool adjoint = false;

  NthOrderOp adjoint_op() const {
    NthOrderOp r = *this;
    r.adjoint = !r.adjoint;
    return r;
  }
};

/// Builds the collapsed operator L_N(t) W(u_1..u_N, f)/W(u_1..u_N) after
/// checking the final-Wronskian reality condition and nodelessness.
NthOrderOp crum_operator(const ChainSpec& spec, const Grid& grid, TimeFactor closed_form_time_factor = nullptr);

/// Composition route when steps exist, determinant route otherwise; adjoints
/// always go through the (reversed) steps.
ClosedFormField apply(const NthOrderOp& op, const ClosedFormField& f);
/// Determinant route regardless of steps (for equivalence checks).
ClosedFormField apply_determinant(const NthOrderOp& op, const ClosedFormField& f);

/// A_{0,N} = -d_xx log |W(u_1..u_N)|^2.
double potential_difference_n(const ChainSpec& spec, double x, double t);
Jet potential_difference_n_jet(const ChainSpec& spec, double x, double t, int order);

RealityReport check_reality_n(const ChainSpec& spec, const Grid& grid, double tolerance = 1e-10);

/// L_N(t) by numeric integration of Im d_xx log W (memoized per t).
TimeFactor chain_time_factor(const ChainSpec& spec, double tol = 1e-10);
TScalar time_factor_n(const ChainSpec& spec, double t);

struct PrefixEvidence {
  int p = 0;
  double min_ratio = 0.0;       // nodelessness evidence for W_p
  double min_abs = 0.0;
  double reality_spread = 0.0;  // prefix reality condition
  double alpha_residual = 0.0;  // eigenvalue residual of u_p
};

struct ReducibilityReport {
  bool certified = false;
  std::string failure;
  std::vector<PrefixEvidence> prefixes;
};

/// Checks alpha ordering, per-function eigenvalue residuals, and prefix
/// Wronskian sign/nodelessness and reality; on success builds the step
/// operators from the prefix-Wronskian ratios.  Optional closed-form step
/// time factors override the numeric-integration route.
ReducibilityReport certify_complete_reducibility(ChainSpec& spec, const Grid& grid,
                                                 std::vector<TimeFactor> step_factors = {},
                                                 double reality_tol = 1e-10, double eigen_tol = 1e-7,
                                                 double node_threshold = 1e-10);

/// Symmetry operator of chain level p: g^(p) = g^(0) - i sum_k L_k^2 A_{k-1,k}.
fields::SymmetryOp chain_symmetry_op(const ChainSpec& spec, int p);

/// (i g - alpha) applied as a field.
ClosedFormField ig_minus_alpha(const fields::SymmetryOp& g, double alpha, const ClosedFormField& f);

/// Pointwise agreement between two fields over the grid, normalized by the
/// larger field magnitude.  `scale_floor` keeps the normalization honest
/// when both sides vanish (annihilation identities): the probe's own
/// magnitude should be supplied there.
ResidualReport field_agreement(const ClosedFormField& a, const ClosedFormField& b, const Grid& grid,
                               double tolerance, std::string name, double scale_floor = 0.0);

double max_field_abs(const ClosedFormField& f, const Grid& grid);

/// Residuals of the factorization identities for the sub-chain p -> p+n:
///   L+ L - prod_k (i g^(p) - alpha_{p+k})    on probes_low,
///   L L+ - prod_k (i g^(p+n) - alpha_{p+k})  on probes_high.
ResidualReport verify_factorization(const ChainSpec& spec, int p, int n,
                                    std::span<const ClosedFormField> probes_low,
                                    std::span<const ClosedFormField> probes_high, const Grid& grid,
                                    double tolerance);

}  // namespace dbx

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "darboux/chain.hpp"

namespace dbx {

/// An (N+1)-component super-state; only nonzero components are stored and
/// block bookkeeping on the indices is exact.
struct SuperState {
  int levels = 3;
  std::map<int, ClosedFormField> components;
  std::string label;

  bool empty() const { return components.empty(); }
};

SuperState single_component_state(int level, ClosedFormField f, int levels = 3);

/// Q_{p,q} = L_{p,q} e_{p,q}: moves component p to component q through the
/// transformation operator (the adjoint moves q back to p).
struct SuperCharge {
  int p = 0;
  int q = 1;
  NthOrderOp op;
  bool adjoint = false;

  int source_level() const { return adjoint ? q : p; }
  int target_level() const { return adjoint ? p : q; }
  SuperCharge adjoint_charge() const {
    SuperCharge r = *this;
    r.adjoint = !r.adjoint;
    return r;
  }
  std::string name() const {
    return std::string("Q") + (adjoint ? "+" : "") + "_" + std::to_string(p) + std::to_string(q);
  }
};

/// S = i diag{g^(0), ..., g^(N)}.
struct SuperOperator {
  std::vector<fields::SymmetryOp> levels;
};

struct SuperAlgebra {
  int n = 2;  // chain length N; the states have N+1 components
  std::vector<SuperCharge> charges;  // Q_{p,q} for p < q, lexicographic
  SuperOperator s;
  std::vector<double> alphas;

  const SuperCharge& charge(int p, int q) const;
};

/// Builds all charges and the super-operator from a certified chain.
SuperAlgebra build_superalgebra(const ChainSpec& spec);

SuperState apply_supercharge(const SuperCharge& q, const SuperState& s);
SuperState apply_super_operator(const SuperOperator& s_op, const SuperState& s);
/// (S - alpha) s.
SuperState apply_s_minus(const SuperOperator& s_op, double alpha, const SuperState& s);

/// Pointwise agreement of two super-states over the grid, normalized by the
/// larger state magnitude (with an optional floor, typically the probe's own
/// magnitude, so annihilation identities are measured honestly).
ResidualReport state_agreement(const SuperState& a, const SuperState& b, const Grid& grid, double tolerance,
                               std::string name, double scale_floor = 0.0);

/// Verifies every relation of the N = 2 nonlinear algebra (commutators with
/// S, the composition rule, the triple-product rules, the mixed products,
/// their Hermitian conjugates, and the exact zero products) on the probe
/// states.  One report per relation.
std::vector<ResidualReport> verify_algebra(const SuperAlgebra& algebra, std::span<const SuperState> probes,
                                           const Grid& grid, double tolerance);

/// Residual of (i d_t - H) applied to Q s, where H = diag{h_0, ..., h_N};
/// probes must solve their level equations within `probe_tol`.
ResidualReport conservation_check(const SuperCharge& q, const SuperState& s,
                                  std::span<const PotentialField> potentials, const Grid& grid,
                                  double tolerance, double probe_tol = 1e-8);

struct SpectrumReport {
  std::vector<double> eigenvalues;     // one per degenerate group, ascending
  std::vector<int> multiplicities;
  std::vector<double> residuals;       // worst pointwise eigen-residual per group
  std::vector<double> rayleigh_values; // all probed states, ascending
};

/// Rayleigh quotients <s, S s>/<s, s> of the super-states of the model with
/// parameters (m, l), grouped into degenerate levels.
SpectrumReport spectrum_report(int m, int l, int k_states, const Grid& grid, const QuadratureRule& rule = {});

/// Worst over all charges of |Q vacuum| / |vacuum| on the grid.
double vacuum_annihilation_residual(const SuperAlgebra& algebra, const SuperState& vacuum, const Grid& grid);

}  // namespace dbx

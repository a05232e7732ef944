#pragma once

#include "darboux/superalgebra.hpp"

namespace dbx {

struct ModelConfig {
  int m = 0;
  int l = 1;
  int states = 6;
  Grid grid = Grid::make();
  double perturbation = 0.0;  // test-only negative control on the potentials
  double tol_analytic = 1e-8;
  double tol_quadrature = 1e-6;
};

/// The fully assembled two-step free-particle model: transformation
/// functions, potentials, step and collapsed operators, certified chain,
/// discrete bases of all three levels, and the N = 2 superalgebra.
struct FreeParticleModel {
  ModelConfig cfg;

  ClosedFormField u_m, u_l, v_l;
  PotentialField V0, V1, V2;
  FirstOrderOp L01, L12;
  NthOrderOp L02;
  ChainSpec chain;
  SuperAlgebra algebra;
  fields::SymmetryOp g0, g1, g2;
  std::vector<ClosedFormField> psi, phi, chi;  // indices 0..states

  std::vector<PotentialField> level_potentials() const { return {V0, V1, V2}; }
  const PotentialField& level_potential(int p) const;
  const fields::SymmetryOp& symmetry(int p) const;
};

/// Validates (m, l, states) and builds everything; throws
/// std::invalid_argument on parity/range violations.
FreeParticleModel build_model(const ModelConfig& cfg);

}  // namespace dbx

#pragma once

#include <vector>

#include "darboux/model.hpp"

namespace dbx {

/// Runs the full verification battery on a built model: reality conditions,
/// exact-solution residuals, intertwining, norm identities, factorizations,
/// the nonlinear algebra, orthonormality, the spectrum pattern, conservation,
/// and the independent-route oracle comparisons.  Check names are stable and
/// prefix-coded by family.
std::vector<ResidualReport> run_check_suite(const FreeParticleModel& md);

/// Subset toggles so callers can stage expensive families.
struct SuiteSelection {
  bool reality = true;
  bool residuals = true;
  bool intertwining = true;
  bool norms = true;
  bool factorizations = true;
  bool algebra = true;
  bool orthonormality = true;
  bool spectrum = true;
  bool conservation = true;
  bool oracles = true;
};

std::vector<ResidualReport> run_check_suite(const FreeParticleModel& md, const SuiteSelection& sel);

}  // namespace dbx

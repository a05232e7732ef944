#pragma once

#include <cmath>

#include "darboux/chain.hpp"
#include "darboux/numerics.hpp"

namespace dbxtest {

inline const dbx::Grid& small_grid() {
  static const dbx::Grid g = dbx::Grid::make(10.0, 257);
  return g;
}

inline bool close(dbx::Complex a, dbx::Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(b));
}

/// max over the grid of |a - b| / (scale of the pair + probe floor).
inline double field_diff(const dbx::ClosedFormField& a, const dbx::ClosedFormField& b,
                         const dbx::Grid& grid = small_grid()) {
  return dbx::field_agreement(a, b, grid, 1.0, "diff").max_norm;
}

}  // namespace dbxtest

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "darboux/field.hpp"

namespace dbx {

/// Verification grid: nodes uniform in the scaled coordinate z, mapped to
/// x = z sqrt(1+t^2) per time sample so Gaussian envelopes stay resolved
/// uniformly in t.
struct Grid {
  std::vector<double> z_nodes;
  std::vector<double> t_samples;
  double z_max = 0.0;
  int n_x = 0;

  static Grid make(double z_max = 10.0, int n_x = 1025,
                   std::vector<double> t_samples = {0.0, -0.5, 0.5, -2.0, 2.0});

  double scale(double t) const { return std::sqrt(1.0 + t * t); }
  double x_at(int i, double t) const { return z_nodes[i] * scale(t); }
};

struct QuadratureRule {
  double decay_threshold = 1e-9;   // boundary |integrand| / max, refusal above
  double convergence_tol = 1e-7;   // full vs half resolution agreement
};

struct IntegralResult {
  Complex value{};
  Complex half_value{};
  double gap() const { return std::abs(value - half_value); }
};

/// Trapezoid over the truncated scaled domain at fixed t, with the built-in
/// half-resolution re-evaluation used as a convergence certificate.
IntegralResult integrate(const std::function<Complex(double x)>& f, double t, const Grid& grid,
                         const QuadratureRule& rule, const std::string& what);

/// <f, g> at fixed t.  Throws if the integrand fails the boundary-decay check
/// or the convergence certificate.
Complex inner_product(const ClosedFormField& f, const ClosedFormField& g, double t, const Grid& grid,
                      const QuadratureRule& rule = {});

std::vector<std::vector<Complex>> gram_matrix(std::span<const ClosedFormField> basis, double t,
                                              const Grid& grid, const QuadratureRule& rule = {});

struct ResidualReport {
  std::string name;
  double max_norm = 0.0;
  double l2_norm = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  double worst_x = 0.0;
  double worst_t = 0.0;
};

/// max/L2 norm of (i d_t + d_xx - V) f over the grid, normalized by max |f|.
ResidualReport schrodinger_residual(const ClosedFormField& f, const PotentialField& V, const Grid& grid,
                                    double tolerance, std::string name = "");

struct FdReport {
  double order_dx = 0.0;
  double order_dxx = 0.0;
  double order_dt = 0.0;
  double max_rel_err = 0.0;  // analytic vs finite difference at the finer step
  bool passed = false;
};

/// Compares analytic derivatives against central differences with step
/// halving and reports the observed convergence orders.
FdReport fd_check(const ClosedFormField& f, const Grid& grid, double h = 1e-3, double min_order = 1.9);

struct NodelessnessReport {
  double min_local_ratio = 0.0;  // |f| against its local envelope
  double min_abs = 0.0;
  double max_abs = 0.0;
  double threshold = 0.0;
  bool passed = false;
  double worst_x = 0.0;
  double worst_t = 0.0;
};

/// Grid evidence that |f| stays bounded away from zero.  |f| at each node is
/// compared with the largest |f| in a small window around it, so growing
/// envelopes do not mask genuine nodes.
NodelessnessReport nodelessness(const ClosedFormField& f, const Grid& grid, double threshold = 1e-10);

}  // namespace dbx

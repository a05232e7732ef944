#pragma once

#include <functional>
#include <string>
#include <utility>

#include "darboux/jet.hpp"

namespace dbx {

using JetEval = std::function<Jet(double x, double t, int order)>;

/// A complex field of (x, t) whose evaluation produces a jet in x.  All
/// derivatives, including the time derivative carried by the jet
/// coefficients, are analytic.
struct ClosedFormField {
  std::string label;
  JetEval eval;

  Jet jet(double x, double t, int order) const { return eval(x, t, order); }
  Complex value(double x, double t) const { return eval(x, t, 0).value(); }
  Complex dx(double x, double t) const { return eval(x, t, 1).deriv(1).v; }
  Complex dxx(double x, double t) const { return eval(x, t, 2).deriv(2).v; }
  Complex dt(double x, double t) const { return eval(x, t, 0).dt(); }
};

ClosedFormField conj_field(const ClosedFormField& f);
ClosedFormField scaled_field(Complex c, const ClosedFormField& f, std::string label = "");
ClosedFormField add_fields(const ClosedFormField& f, const ClosedFormField& g, std::string label = "");

/// The scaled coordinate z = x / sqrt(1 + t^2) and its Jacobian dz/dx.
struct ScaledCoordinate {
  double z;
  double jacobian;
};
ScaledCoordinate scaled_coordinate(double x, double t);

/// z as a jet in x (captures the t-dependence of the scaling).
Jet scaled_coordinate_jet(double x, double t, int order);

/// A real-valued potential defined through a complex closed form; the
/// imaginary part of the defining expression is a reality defect that must
/// stay below tolerance on the grid (checked by tests, reported by value()).
struct PotentialField {
  std::string label;
  int order = 0;  // 0: free level, 1: first transform, 2: second transform
  int m = -1;
  int l = -1;
  JetEval eval;  // null for the zero potential

  bool is_zero() const { return !eval; }
  Jet jet(double x, double t, int ord) const;
  double value(double x, double t) const;
  double imag_defect(double x, double t) const;
};

PotentialField zero_potential();

/// Test-only negative control: V + epsilon.
PotentialField perturbed(const PotentialField& v, double epsilon);

}  // namespace dbx

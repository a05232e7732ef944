#include "darboux/field.hpp"

#include <cmath>

namespace dbx {

ClosedFormField conj_field(const ClosedFormField& f) {
  return {"conj(" + f.label + ")",
          [inner = f.eval](double x, double t, int order) { return inner(x, t, order).conjugated(); }};
}

ClosedFormField scaled_field(Complex c, const ClosedFormField& f, std::string label) {
  if (label.empty()) label = "scale(" + f.label + ")";
  return {std::move(label),
          [c, inner = f.eval](double x, double t, int order) { return inner(x, t, order) * TScalar(c); }};
}

ClosedFormField add_fields(const ClosedFormField& f, const ClosedFormField& g, std::string label) {
  if (label.empty()) label = f.label + "+" + g.label;
  return {std::move(label), [a = f.eval, b = g.eval](double x, double t, int order) {
            return a(x, t, order) + b(x, t, order);
          }};
}

ScaledCoordinate scaled_coordinate(double x, double t) {
  const double jac = 1.0 / std::sqrt(1.0 + t * t);
  return {x * jac, jac};
}

Jet scaled_coordinate_jet(double x, double t, int order) {
  const TScalar one_t2 = 1.0 + t_variable(t) * t_variable(t);
  return Jet::variable(x, order) * pow(one_t2, -0.5);
}

Jet PotentialField::jet(double x, double t, int ord) const {
  if (is_zero()) return Jet::constant(0.0, ord);
  return eval(x, t, ord);
}

double PotentialField::value(double x, double t) const {
  if (is_zero()) return 0.0;
  return eval(x, t, 0).value().real();
}

double PotentialField::imag_defect(double x, double t) const {
  if (is_zero()) return 0.0;
  return std::abs(eval(x, t, 0).value().imag());
}

PotentialField zero_potential() { return {"V0", 0, -1, -1, nullptr}; }

PotentialField perturbed(const PotentialField& v, double epsilon) {
  if (epsilon == 0.0) return v;
  PotentialField r = v;
  r.label = v.label + "+eps";
  if (v.is_zero()) {
    r.eval = [epsilon](double, double, int order) { return Jet::constant(epsilon, order); };
  } else {
    r.eval = [epsilon, inner = v.eval](double x, double t, int order) {
      return inner(x, t, order) + TScalar(epsilon);
    };
  }
  return r;
}

}  // namespace dbx

#include "darboux/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>

namespace dbx {
namespace {

/// Im d_xx log u at (x, t) from an order-2 jet.
double log_ddx_imag_at(const ClosedFormField& u, double x, double t) {
  const Jet j = u.jet(x, t, 2);
  require_off_node(j, x, t, u.label);
  const Complex r = j.deriv(2).v / j.value() - std::pow(j.deriv(1).v / j.value(), 2);
  return r.imag();
}

double adaptive_trapezoid(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  int n = 16;
  double h = (b - a) / n;
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(a + i * h);
  double prev = sum * h;
  for (int it = 0; it < 16; ++it) {
    double add = 0.0;
    for (int i = 0; i < n; ++i) add += f(a + (i + 0.5) * h);
    n *= 2;
    h *= 0.5;
    const double cur = 0.5 * prev + add * h;
    if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

void require_off_node(const Jet& u, double x, double t, const std::string& label) {
  const double mag = std::abs(u.value());
  const double local_scale = 1.0 + ((u.order() >= 1) ? std::abs(u.deriv(1).v) : 0.0);
  if (mag < 1e-12 * local_scale)
    throw NodeProximityError(x, t, "transformation function " + label + " too close to a node (|u| = " +
                                       std::to_string(mag) + ")");
}

RealityReport check_reality(const ClosedFormField& u, const Grid& grid, double tolerance) {
  RealityReport rep;
  rep.tolerance = tolerance;
  for (double t : grid.t_samples) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double z : grid.z_nodes) {
      const double x = z * grid.scale(t);
      const Jet j = u.jet(x, t, 2);
      if (std::abs(j.value()) < 1e-280) continue;  // synthetic inputs may have nodes
      const Complex r = j.deriv(2).v / j.value() - std::pow(j.deriv(1).v / j.value(), 2);
      lo = std::min(lo, r.imag());
      hi = std::max(hi, r.imag());
    }
    const double spread = hi - lo;
    if (spread > rep.max_spread) {
      rep.max_spread = spread;
      rep.worst_t = t;
    }
  }
  rep.passed = rep.max_spread <= tolerance;
  return rep;
}

TimeFactor numeric_time_factor(std::function<double(double t)> log_ddx_imag, double tol) {
  auto cache = std::make_shared<std::map<double, double>>();
  return [log_ddx_imag = std::move(log_ddx_imag), tol, cache](double t) -> TScalar {
    const double c = log_ddx_imag(t);
    auto it = cache->find(t);
    double value;
    if (it != cache->end()) {
      value = it->second;
    } else {
      value = std::exp(2.0 * adaptive_trapezoid(log_ddx_imag, 0.0, t, tol));
      (*cache)[t] = value;
    }
    return {Complex(value), Complex(2.0 * c * value)};
  };
}

FirstOrderOp build_operator(const ClosedFormField& u, const Grid& grid, TimeFactor closed_form_time_factor,
                            double reality_tol, double node_threshold) {
  const NodelessnessReport nodes = nodelessness(u, grid, node_threshold);
  if (!nodes.passed)
    throw std::invalid_argument("transformation function " + u.label +
                                " has a node on the grid (local ratio " +
                                std::to_string(nodes.min_local_ratio) + " at x = " +
                                std::to_string(nodes.worst_x) + ", t = " + std::to_string(nodes.worst_t) + ")");
  const RealityReport reality = check_reality(u, grid, reality_tol);
  if (!reality.passed)
    throw std::invalid_argument("transformation function " + u.label +
                                " violates the reality condition (spread " +
                                std::to_string(reality.max_spread) + ")");
  FirstOrderOp op;
  op.source = u;
  if (closed_form_time_factor) {
    op.time_factor = std::move(closed_form_time_factor);
  } else {
    const double z_ref = 0.5;
    op.time_factor = numeric_time_factor(
        [u, z_ref](double t) { return log_ddx_imag_at(u, z_ref * std::sqrt(1.0 + t * t), t); });
  }
  return op;
}

ClosedFormField apply(const FirstOrderOp& op, const ClosedFormField& f) {
  const std::string label =
      (op.adjoint ? "L+[" : "L[") + op.source.label + "](" + f.label + ")";
  return {label, [op, inner = f.eval](double x, double t, int order) {
            const Jet ju = op.source.jet(x, t, order + 1);
            require_off_node(ju, x, t, op.source.label);
            const Jet a = ju.derivative() / ju.truncated(order);
            const Jet jf = inner(x, t, order + 1);
            const TScalar l1 = op.time_factor(t);
            if (!op.adjoint) return (jf.derivative() - a * jf.truncated(order)) * l1;
            return (a.conjugated() * jf.truncated(order) + jf.derivative()) * (-l1);
          }};
}

double potential_difference(const ClosedFormField& u, double x, double t) {
  const Jet j = u.jet(x, t, 2);
  require_off_node(j, x, t, u.label);
  const Complex r = j.deriv(2).v / j.value() - std::pow(j.deriv(1).v / j.value(), 2);
  return -2.0 * r.real();
}

Jet potential_difference_jet(const ClosedFormField& u, double x, double t, int order) {
  const Jet j = u.jet(x, t, order + 2);
  require_off_node(j, x, t, u.label);
  const Jet mod2 = j * j.conjugated();
  return -log(mod2).derivative().derivative();
}

ClosedFormField kernel_partner(const FirstOrderOp& op) {
  return {"v[" + op.source.label + "]", [op](double x, double t, int order) {
            const Jet ju = op.source.jet(x, t, order).conjugated();
            require_off_node(ju, x, t, op.source.label);
            return Jet::constant(1.0, order) / (ju * op.time_factor(t));
          }};
}

}  // namespace dbx

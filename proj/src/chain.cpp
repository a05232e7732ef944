#include "darboux/chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace dbx {
namespace {

Jet det_over(const std::vector<std::vector<Jet>>& e, const std::vector<int>& rows, int col, int order) {
  if (rows.size() == 1) return e[rows[0]][col];
  Jet sum = Jet::constant(0.0, order);
  double sign = 1.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    std::vector<int> rest;
    rest.reserve(rows.size() - 1);
    for (size_t j = 0; j < rows.size(); ++j)
      if (j != i) rest.push_back(rows[j]);
    const Jet term = e[rows[i]][col] * det_over(e, rest, col + 1, order);
    sum += (sign > 0) ? term : -term;
    sign = -sign;
  }
  return sum;
}

/// Determinant of the p x p matrix with entry (row j, column k) equal to the
/// j-th x-derivative of fields[k], as a jet of the requested order.
Jet wronskian_jet_impl(std::span<const ClosedFormField> fields, double x, double t, int order) {
  const int p = int(fields.size());
  if (p == 0) throw std::invalid_argument("wronskian of an empty field list");
  if (p == 1) return fields[0].jet(x, t, order);
  std::vector<std::vector<Jet>> entries(p);
  for (int k = 0; k < p; ++k) {
    Jet cur = fields[k].jet(x, t, order + p - 1);
    entries[0].reserve(p);
    for (int j = 0; j < p; ++j) {
      entries[j].push_back(cur.truncated(order));
      if (j + 1 < p) cur = cur.derivative();
    }
  }
  std::vector<int> rows(p);
  for (int j = 0; j < p; ++j) rows[j] = j;
  return det_over(entries, rows, 0, order);
}

}  // namespace

double max_field_abs(const ClosedFormField& f, const Grid& grid) {
  double m = 0.0;
  for (double t : grid.t_samples)
    for (double z : grid.z_nodes) m = std::max(m, std::abs(f.value(z * grid.scale(t), t)));
  return m;
}

Complex wronskian(std::span<const ClosedFormField> fields, double x, double t) {
  return wronskian_jet_impl(fields, x, t, 0).value();
}

Jet wronskian_jet(std::span<const ClosedFormField> fields, double x, double t, int order) {
  return wronskian_jet_impl(fields, x, t, order);
}

ClosedFormField wronskian_field(std::vector<ClosedFormField> fields, std::string label) {
  if (label.empty()) {
    label = "W(";
    for (size_t i = 0; i < fields.size(); ++i) label += (i ? "," : "") + fields[i].label;
    label += ")";
  }
  return {std::move(label), [fields = std::move(fields)](double x, double t, int order) {
            return wronskian_jet_impl(fields, x, t, order);
          }};
}

ClosedFormField prefix_ratio_field(const ChainSpec& spec, int p) {
  if (p < 1 || p > spec.size()) throw std::invalid_argument("prefix index out of range");
  if (p == 1) return spec.transformation_functions[0];
  std::vector<ClosedFormField> num(spec.transformation_functions.begin(),
                                   spec.transformation_functions.begin() + p);
  std::vector<ClosedFormField> den(spec.transformation_functions.begin(),
                                   spec.transformation_functions.begin() + p - 1);
  return {"sigma_" + std::to_string(p),
          [num = std::move(num), den = std::move(den)](double x, double t, int order) {
            const Jet d = wronskian_jet_impl(den, x, t, order);
            require_off_node(d, x, t, "prefix Wronskian");
            return wronskian_jet_impl(num, x, t, order) / d;
          }};
}

NthOrderOp crum_operator(const ChainSpec& spec, const Grid& grid, TimeFactor closed_form_time_factor) {
  const RealityReport rc2 = check_reality_n(spec, grid);
  if (!rc2.passed)
    throw std::invalid_argument("chain violates the Wronskian reality condition (spread " +
                                std::to_string(rc2.max_spread) + ")");
  const ClosedFormField W = wronskian_field(spec.transformation_functions);
  const NodelessnessReport nodes = nodelessness(W, grid);
  if (!nodes.passed)
    throw std::invalid_argument("chain Wronskian has a node on the grid (ratio " +
                                std::to_string(nodes.min_local_ratio) + ")");
  NthOrderOp op;
  op.order = spec.size();
  op.funcs = spec.transformation_functions;
  op.steps = spec.step_operators;
  op.time_factor = closed_form_time_factor ? std::move(closed_form_time_factor) : chain_time_factor(spec);
  return op;
}

ClosedFormField apply_determinant(const NthOrderOp& op, const ClosedFormField& f) {
  if (op.adjoint)
    throw std::logic_error("determinant route has no adjoint; certify the chain to get step operators");
  return {"L0" + std::to_string(op.order) + "(" + f.label + ")",
          [op, f](double x, double t, int order) {
            std::vector<ClosedFormField> all = op.funcs;
            all.push_back(f);
            const Jet den = wronskian_jet_impl(op.funcs, x, t, order);
            require_off_node(den, x, t, "chain Wronskian");
            return wronskian_jet_impl(all, x, t, order) / den * op.time_factor(t);
          }};
}

ClosedFormField apply(const NthOrderOp& op, const ClosedFormField& f) {
  if (op.steps.empty()) return apply_determinant(op, f);
  ClosedFormField cur = f;
  if (!op.adjoint) {
    for (const FirstOrderOp& step : op.steps) cur = apply(step, cur);
  } else {
    for (auto it = op.steps.rbegin(); it != op.steps.rend(); ++it) cur = apply(it->adjoint_op(), cur);
  }
  return cur;
}

double potential_difference_n(const ChainSpec& spec, double x, double t) {
  return potential_difference_n_jet(spec, x, t, 0).value().real();
}

Jet potential_difference_n_jet(const ChainSpec& spec, double x, double t, int order) {
  const Jet W = wronskian_jet_impl(spec.transformation_functions, x, t, order + 2);
  require_off_node(W, x, t, "chain Wronskian");
  return -log(W * W.conjugated()).derivative().derivative();
}

RealityReport check_reality_n(const ChainSpec& spec, const Grid& grid, double tolerance) {
  return check_reality(wronskian_field(spec.transformation_functions), grid, tolerance);
}

TimeFactor chain_time_factor(const ChainSpec& spec, double tol) {
  const ClosedFormField W = wronskian_field(spec.transformation_functions);
  const double z_ref = 0.5;
  return numeric_time_factor(
      [W, z_ref](double t) {
        const double x = z_ref * std::sqrt(1.0 + t * t);
        const Jet j = W.jet(x, t, 2);
        require_off_node(j, x, t, W.label);
        const Complex r = j.deriv(2).v / j.value() - std::pow(j.deriv(1).v / j.value(), 2);
        return r.imag();
      },
      tol);
}

TScalar time_factor_n(const ChainSpec& spec, double t) { return chain_time_factor(spec)(t); }

ReducibilityReport certify_complete_reducibility(ChainSpec& spec, const Grid& grid,
                                                 std::vector<TimeFactor> step_factors, double reality_tol,
                                                 double eigen_tol, double node_threshold) {
  ReducibilityReport rep;
  const int n = spec.size();
  if (n == 0) {
    rep.failure = "empty chain";
    return rep;
  }
  if (int(spec.alphas.size()) != n) {
    rep.failure = "alpha list size mismatch";
    return rep;
  }
  if (!step_factors.empty() && int(step_factors.size()) != n) {
    rep.failure = "step time-factor list size mismatch";
    return rep;
  }
  for (int k = 1; k < n; ++k) {
    if (!(spec.alphas[k - 1] > spec.alphas[k])) {
      rep.failure = "alpha ordering violated: alpha_" + std::to_string(k) + " = " +
                    std::to_string(spec.alphas[k - 1]) + " <= alpha_" + std::to_string(k + 1) + " = " +
                    std::to_string(spec.alphas[k]);
      return rep;
    }
  }

  for (int p = 1; p <= n; ++p) {
    PrefixEvidence ev;
    ev.p = p;
    const ClosedFormField& u = spec.transformation_functions[p - 1];
    const ClosedFormField gu = apply_symmetry_field(spec.base_symmetry, u);
    double max_u = 0.0, max_res = 0.0;
    for (double t : grid.t_samples) {
      for (double z : grid.z_nodes) {
        const double x = z * grid.scale(t);
        const Complex uv = u.value(x, t);
        max_u = std::max(max_u, std::abs(uv));
        max_res = std::max(max_res, std::abs(kI * gu.value(x, t) - spec.alphas[p - 1] * uv));
      }
    }
    ev.alpha_residual = (max_u > 0.0) ? max_res / max_u : max_res;
    if (ev.alpha_residual > eigen_tol) {
      rep.prefixes.push_back(ev);
      rep.failure = "u_" + std::to_string(p) + " is not an eigenfunction of the base symmetry operator (residual " +
                    std::to_string(ev.alpha_residual) + ")";
      return rep;
    }

    std::vector<ClosedFormField> prefix(spec.transformation_functions.begin(),
                                        spec.transformation_functions.begin() + p);
    const ClosedFormField W = wronskian_field(std::move(prefix));
    const NodelessnessReport nodes = nodelessness(W, grid, node_threshold);
    ev.min_ratio = nodes.min_local_ratio;
    ev.min_abs = nodes.min_abs;
    const RealityReport reality = check_reality(W, grid, reality_tol);
    ev.reality_spread = reality.max_spread;
    rep.prefixes.push_back(ev);
    if (!nodes.passed) {
      rep.failure = "prefix Wronskian W_" + std::to_string(p) + " loses sign definiteness on the grid";
      return rep;
    }
    if (!reality.passed) {
      rep.failure = "prefix Wronskian W_" + std::to_string(p) + " violates the reality condition (spread " +
                    std::to_string(reality.max_spread) + ")";
      return rep;
    }
  }

  spec.step_operators.clear();
  spec.step_sources.clear();
  spec.step_time_factors.clear();
  for (int p = 1; p <= n; ++p) {
    ClosedFormField sigma = prefix_ratio_field(spec, p);
    TimeFactor tf = step_factors.empty() ? nullptr : step_factors[p - 1];
    FirstOrderOp op = build_operator(sigma, grid, std::move(tf), reality_tol, node_threshold);
    spec.step_time_factors.push_back(op.time_factor);
    spec.step_operators.push_back(std::move(op));
    spec.step_sources.push_back(std::move(sigma));
  }
  spec.certified = true;
  rep.certified = true;
  return rep;
}

fields::SymmetryOp chain_symmetry_op(const ChainSpec& spec, int p) {
  if (p == 0) return spec.base_symmetry;
  if (!spec.certified) throw std::logic_error("chain symmetry operators require a certified chain");
  if (p < 0 || p > spec.size()) throw std::invalid_argument("chain level out of range");
  std::vector<ClosedFormField> sources(spec.step_sources.begin(), spec.step_sources.begin() + p);
  std::vector<TimeFactor> factors(spec.step_time_factors.begin(), spec.step_time_factors.begin() + p);
  JetEval shift = [sources, factors, base = spec.base_symmetry.shift](double x, double t, int order) {
    Jet sum = base ? base(x, t, order) : Jet::constant(0.0, order);
    for (size_t k = 0; k < sources.size(); ++k) {
      const TScalar l1 = factors[k](t);
      sum += potential_difference_jet(sources[k], x, t, order) * (l1 * l1);
    }
    return sum;
  };
  return fields::symmetry_from_shift(p, std::move(shift));
}

ClosedFormField ig_minus_alpha(const fields::SymmetryOp& g, double alpha, const ClosedFormField& f) {
  return {"(ig-a)(" + f.label + ")", [g, alpha, inner = f.eval](double x, double t, int order) {
            return fields::apply_symmetry_jet(g, inner, x, t, order) * TScalar(kI) -
                   inner(x, t, order) * TScalar(alpha);
          }};
}

ResidualReport field_agreement(const ClosedFormField& a, const ClosedFormField& b, const Grid& grid,
                               double tolerance, std::string name, double scale_floor) {
  ResidualReport rep;
  rep.name = std::move(name);
  rep.tolerance = tolerance;
  double scale = scale_floor, sum_sq = 0.0;
  long count = 0;
  for (double t : grid.t_samples) {
    for (double z : grid.z_nodes) {
      const double x = z * grid.scale(t);
      const Complex av = a.value(x, t);
      const Complex bv = b.value(x, t);
      scale = std::max({scale, std::abs(av), std::abs(bv)});
      const double d = std::abs(av - bv);
      sum_sq += d * d;
      ++count;
      if (d > rep.max_norm) {
        rep.max_norm = d;
        rep.worst_x = x;
        rep.worst_t = t;
      }
    }
  }
  if (scale > 0.0) {
    rep.max_norm /= scale;
    rep.l2_norm = std::sqrt(sum_sq / double(count)) / scale;
  }
  rep.passed = rep.max_norm <= tolerance;
  return rep;
}

ResidualReport verify_factorization(const ChainSpec& spec, int p, int n,
                                    std::span<const ClosedFormField> probes_low,
                                    std::span<const ClosedFormField> probes_high, const Grid& grid,
                                    double tolerance) {
  if (!spec.certified) throw std::logic_error("verify_factorization requires a certified chain");
  if (p < 0 || n < 1 || p + n > spec.size())
    throw std::invalid_argument("factorization indices out of range: p = " + std::to_string(p) +
                                ", n = " + std::to_string(n));
  NthOrderOp sub;
  sub.order = n;
  sub.steps.assign(spec.step_operators.begin() + p, spec.step_operators.begin() + p + n);
  const fields::SymmetryOp g_low = chain_symmetry_op(spec, p);
  const fields::SymmetryOp g_high = chain_symmetry_op(spec, p + n);

  ResidualReport rep;
  rep.name = "factorization/p" + std::to_string(p) + "_n" + std::to_string(n);
  rep.tolerance = tolerance;
  const auto fold = [&](const fields::SymmetryOp& g, ClosedFormField f) {
    for (int k = 1; k <= n; ++k) f = ig_minus_alpha(g, spec.alphas[p + k - 1], f);
    return f;
  };
  const auto merge = [&rep](const ResidualReport& r) {
    if (r.max_norm > rep.max_norm) {
      rep.max_norm = r.max_norm;
      rep.worst_x = r.worst_x;
      rep.worst_t = r.worst_t;
    }
    rep.l2_norm = std::max(rep.l2_norm, r.l2_norm);
  };
  for (const ClosedFormField& probe : probes_low) {
    const ClosedFormField lhs = apply(sub.adjoint_op(), apply(sub, probe));
    merge(field_agreement(lhs, fold(g_low, probe), grid, tolerance, rep.name, max_field_abs(probe, grid)));
  }
  for (const ClosedFormField& probe : probes_high) {
    const ClosedFormField lhs = apply(sub, apply(sub.adjoint_op(), probe));
    merge(field_agreement(lhs, fold(g_high, probe), grid, tolerance, rep.name, max_field_abs(probe, grid)));
  }
  rep.passed = rep.max_norm <= tolerance;
  return rep;
}

}  // namespace dbx

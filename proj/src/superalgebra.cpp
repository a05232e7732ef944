#include "darboux/superalgebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "darboux/fields.hpp"

namespace dbx {
namespace {

using StateOp = std::function<SuperState(const SuperState&)>;

double max_state_abs(const SuperState& s, const Grid& grid) {
  double m = 0.0;
  for (const auto& [lvl, f] : s.components)
    for (double t : grid.t_samples)
      for (double z : grid.z_nodes) m = std::max(m, std::abs(f.value(z * grid.scale(t), t)));
  return m;
}

}  // namespace

SuperState single_component_state(int level, ClosedFormField f, int levels) {
  if (level < 0 || level >= levels) throw std::invalid_argument("super-state level out of range");
  SuperState s;
  s.levels = levels;
  s.label = "(" + std::to_string(level) + ":" + f.label + ")";
  s.components.emplace(level, std::move(f));
  return s;
}

const SuperCharge& SuperAlgebra::charge(int p, int q) const {
  for (const SuperCharge& c : charges)
    if (c.p == p && c.q == q) return c;
  throw std::invalid_argument("no charge Q_" + std::to_string(p) + std::to_string(q));
}

SuperAlgebra build_superalgebra(const ChainSpec& spec) {
  if (!spec.certified) throw std::logic_error("build_superalgebra requires a certified chain");
  SuperAlgebra a;
  a.n = spec.size();
  a.alphas = spec.alphas;
  for (int p = 0; p < a.n; ++p) {
    for (int q = p + 1; q <= a.n; ++q) {
      SuperCharge c;
      c.p = p;
      c.q = q;
      c.op.order = q - p;
      c.op.steps.assign(spec.step_operators.begin() + p, spec.step_operators.begin() + q);
      if (p == 0)
        c.op.funcs.assign(spec.transformation_functions.begin(), spec.transformation_functions.begin() + q);
      TimeFactor prod = [factors = std::vector<TimeFactor>(spec.step_time_factors.begin() + p,
                                                           spec.step_time_factors.begin() + q)](double t) {
        TScalar r = 1.0;
        for (const TimeFactor& f : factors) r = r * f(t);
        return r;
      };
      c.op.time_factor = std::move(prod);
      a.charges.push_back(std::move(c));
    }
  }
  for (int lvl = 0; lvl <= a.n; ++lvl) a.s.levels.push_back(chain_symmetry_op(spec, lvl));
  return a;
}

SuperState apply_supercharge(const SuperCharge& q, const SuperState& s) {
  SuperState r;
  r.levels = s.levels;
  r.label = q.name() + s.label;
  const auto it = s.components.find(q.source_level());
  if (it == s.components.end()) return r;  // exact zero by block structure
  NthOrderOp op = q.op;
  op.adjoint = q.adjoint;
  r.components.emplace(q.target_level(), apply(op, it->second));
  return r;
}

SuperState apply_super_operator(const SuperOperator& s_op, const SuperState& s) {
  SuperState r;
  r.levels = s.levels;
  r.label = "S" + s.label;
  for (const auto& [lvl, f] : s.components) {
    const fields::SymmetryOp& g = s_op.levels.at(lvl);
    r.components.emplace(lvl, scaled_field(kI, fields::apply_symmetry_field(g, f)));
  }
  return r;
}

SuperState apply_s_minus(const SuperOperator& s_op, double alpha, const SuperState& s) {
  SuperState r;
  r.levels = s.levels;
  r.label = "(S-a)" + s.label;
  for (const auto& [lvl, f] : s.components)
    r.components.emplace(lvl, ig_minus_alpha(s_op.levels.at(lvl), alpha, f));
  return r;
}

ResidualReport state_agreement(const SuperState& a, const SuperState& b, const Grid& grid, double tolerance,
                               std::string name, double scale_floor) {
  ResidualReport rep;
  rep.name = std::move(name);
  rep.tolerance = tolerance;
  std::vector<int> levels;
  for (const auto& [lvl, f] : a.components) levels.push_back(lvl);
  for (const auto& [lvl, f] : b.components)
    if (!a.components.count(lvl)) levels.push_back(lvl);

  double scale = scale_floor, sum_sq = 0.0;
  long count = 0;
  for (int lvl : levels) {
    const auto ia = a.components.find(lvl);
    const auto ib = b.components.find(lvl);
    for (double t : grid.t_samples) {
      for (double z : grid.z_nodes) {
        const double x = z * grid.scale(t);
        const Complex av = (ia != a.components.end()) ? ia->second.value(x, t) : Complex{};
        const Complex bv = (ib != b.components.end()) ? ib->second.value(x, t) : Complex{};
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
  }
  if (scale > 0.0) {
    rep.max_norm /= scale;
    rep.l2_norm = std::sqrt(sum_sq / std::max(count, 1L)) / scale;
  }
  rep.passed = rep.max_norm <= tolerance;
  return rep;
}

std::vector<ResidualReport> verify_algebra(const SuperAlgebra& algebra, std::span<const SuperState> probes,
                                           const Grid& grid, double tolerance) {
  if (algebra.n != 2) throw std::invalid_argument("verify_algebra implements the N = 2 relation list");
  const double a1 = algebra.alphas[0];
  const double a2 = algebra.alphas[1];
  const SuperCharge q01 = algebra.charge(0, 1);
  const SuperCharge q02 = algebra.charge(0, 2);
  const SuperCharge q12 = algebra.charge(1, 2);
  const SuperCharge q01a = q01.adjoint_charge();
  const SuperCharge q02a = q02.adjoint_charge();
  const SuperCharge q12a = q12.adjoint_charge();

  const auto Q = [](const SuperCharge& c) {
    return StateOp([c](const SuperState& s) { return apply_supercharge(c, s); });
  };
  const auto S = [&](const SuperState& s) { return apply_super_operator(algebra.s, s); };
  const auto Sm = [&](double alpha) {
    return StateOp([&, alpha](const SuperState& s) { return apply_s_minus(algebra.s, alpha, s); });
  };
  const auto chainOp = [](std::vector<StateOp> ops) {
    return StateOp([ops = std::move(ops)](const SuperState& s) {
      SuperState cur = s;
      for (auto it = ops.rbegin(); it != ops.rend(); ++it) cur = (*it)(cur);
      return cur;
    });
  };

  struct Relation {
    std::string name;
    StateOp lhs;
    StateOp rhs;
  };
  std::vector<Relation> relations;
  for (const SuperCharge* c : {&q01, &q02, &q12, &q01a, &q02a, &q12a}) {
    relations.push_back({"algebra/[S," + c->name() + "]",
                         chainOp({StateOp([&](const SuperState& s) { return S(s); }), Q(*c)}),
                         chainOp({Q(*c), StateOp([&](const SuperState& s) { return S(s); })})});
  }
  relations.push_back({"algebra/Q12.Q01=Q02", chainOp({Q(q12), Q(q01)}), Q(q02)});
  relations.push_back({"algebra/Q01+.Q12+=Q02+", chainOp({Q(q01a), Q(q12a)}), Q(q02a)});
  relations.push_back({"algebra/Q01.Q01+.Q01=(S-a1)Q01", chainOp({Q(q01), Q(q01a), Q(q01)}),
                       chainOp({Sm(a1), Q(q01)})});
  relations.push_back({"algebra/Q01+.Q01.Q01+=Q01+(S-a1)", chainOp({Q(q01a), Q(q01), Q(q01a)}),
                       chainOp({Q(q01a), Sm(a1)})});
  relations.push_back({"algebra/Q12.Q12+.Q12=(S-a2)Q12", chainOp({Q(q12), Q(q12a), Q(q12)}),
                       chainOp({Sm(a2), Q(q12)})});
  relations.push_back({"algebra/Q12+.Q12.Q12+=Q12+(S-a2)", chainOp({Q(q12a), Q(q12), Q(q12a)}),
                       chainOp({Q(q12a), Sm(a2)})});
  relations.push_back({"algebra/Q02.Q02+.Q02=(S-a1)(S-a2)Q02", chainOp({Q(q02), Q(q02a), Q(q02)}),
                       chainOp({Sm(a1), Sm(a2), Q(q02)})});
  relations.push_back({"algebra/Q02+.Q02.Q02+=Q02+(S-a1)(S-a2)", chainOp({Q(q02a), Q(q02), Q(q02a)}),
                       chainOp({Q(q02a), Sm(a1), Sm(a2)})});
  relations.push_back({"algebra/Q01.Q02+=(S-a1)Q12+", chainOp({Q(q01), Q(q02a)}), chainOp({Sm(a1), Q(q12a)})});
  relations.push_back({"algebra/Q02.Q01+=Q12(S-a1)", chainOp({Q(q02), Q(q01a)}), chainOp({Q(q12), Sm(a1)})});
  relations.push_back({"algebra/Q02+.Q12=(S-a2)Q01+", chainOp({Q(q02a), Q(q12)}), chainOp({Sm(a2), Q(q01a)})});
  relations.push_back({"algebra/Q12+.Q02=Q01(S-a2)", chainOp({Q(q12a), Q(q02)}), chainOp({Q(q01), Sm(a2)})});

  std::vector<ResidualReport> reports;
  for (const Relation& rel : relations) {
    ResidualReport worst;
    worst.name = rel.name;
    worst.tolerance = tolerance;
    worst.passed = true;
    for (const SuperState& probe : probes) {
      const SuperState lhs = rel.lhs(probe);
      const SuperState rhs = rel.rhs(probe);
      if (lhs.empty() && rhs.empty()) continue;  // block structure; nothing to measure
      const ResidualReport r = state_agreement(lhs, rhs, grid, tolerance, rel.name, max_state_abs(probe, grid));
      if (r.max_norm >= worst.max_norm) {
        const bool keep_pass = worst.passed && r.passed;
        worst = r;
        worst.passed = keep_pass;
      } else {
        worst.passed = worst.passed && r.passed;
      }
    }
    reports.push_back(worst);
  }

  // All other products of two charges vanish identically through the matrix
  // units; confirmed exactly on the block bookkeeping.
  {
    ResidualReport zero;
    zero.name = "algebra/zero-products";
    zero.tolerance = tolerance;
    zero.passed = true;
    const std::vector<const SuperCharge*> all = {&q01, &q02, &q12, &q01a, &q02a, &q12a};
    for (const SuperCharge* x : all) {
      for (const SuperCharge* y : all) {
        if (x->source_level() == y->target_level()) continue;  // covered by a relation above
        for (const SuperState& probe : probes) {
          const SuperState r = apply_supercharge(*x, apply_supercharge(*y, probe));
          if (!r.empty()) {
            zero.passed = false;
            zero.max_norm = 1.0;
          }
        }
      }
    }
    reports.push_back(zero);
  }
  return reports;
}

ResidualReport conservation_check(const SuperCharge& q, const SuperState& s,
                                  std::span<const PotentialField> potentials, const Grid& grid,
                                  double tolerance, double probe_tol) {
  for (const auto& [lvl, f] : s.components) {
    const ResidualReport pre = schrodinger_residual(f, potentials[lvl], grid, probe_tol);
    if (!pre.passed)
      throw std::invalid_argument("conservation_check probe " + f.label +
                                  " is not a solution at level " + std::to_string(lvl) +
                                  " (residual " + std::to_string(pre.max_norm) + ")");
  }
  ResidualReport rep;
  rep.name = "conservation/" + q.name() + s.label;
  rep.tolerance = tolerance;
  rep.passed = true;
  const SuperState qs = apply_supercharge(q, s);
  for (const auto& [lvl, f] : qs.components) {
    const ResidualReport r = schrodinger_residual(f, potentials[lvl], grid, tolerance, rep.name);
    if (r.max_norm > rep.max_norm) {
      rep.max_norm = r.max_norm;
      rep.l2_norm = r.l2_norm;
      rep.worst_x = r.worst_x;
      rep.worst_t = r.worst_t;
    }
    rep.passed = rep.passed && r.passed;
  }
  return rep;
}

SpectrumReport spectrum_report(int m, int l, int k_states, const Grid& grid, const QuadratureRule& rule) {
  if (k_states < 3) throw std::invalid_argument("spectrum_report requires K >= 3 states");
  fields::validate_model_indices(m, l);

  struct Probe {
    int level;
    ClosedFormField f;
  };
  std::vector<Probe> states;
  states.push_back({2, fields::chi_state(0, m, l)});
  states.push_back({2, fields::chi_state(1, m, l)});
  states.push_back({1, fields::phi_state(0, m)});
  for (int n = 0; n + 3 <= k_states; ++n) {
    states.push_back({2, fields::chi_state(n + 2, m, l)});
    states.push_back({1, fields::phi_state(n + 1, m)});
    states.push_back({0, fields::psi_basis(n)});
  }
  const std::vector<fields::SymmetryOp> g = {fields::symmetry_op(0, m, l), fields::symmetry_op(1, m, l),
                                             fields::symmetry_op(2, m, l)};
  const double t0 = grid.t_samples.front();

  std::vector<std::pair<double, double>> values;  // (rayleigh, pointwise residual)
  for (const Probe& p : states) {
    const ClosedFormField igf = scaled_field(kI, fields::apply_symmetry_field(g[p.level], p.f));
    const Complex num = inner_product(p.f, igf, t0, grid, rule);
    const Complex den = inner_product(p.f, p.f, t0, grid, rule);
    const double mu = (num / den).real();
    const ResidualReport res =
        field_agreement(igf, scaled_field(mu, p.f), grid, 1.0, "spectrum/" + p.f.label);
    values.emplace_back(mu, res.max_norm);
  }
  std::sort(values.begin(), values.end());

  SpectrumReport rep;
  for (const auto& [mu, r] : values) rep.rayleigh_values.push_back(mu);
  size_t i = 0;
  while (i < values.size()) {
    size_t j = i;
    while (j + 1 < values.size() && values[j + 1].first - values[j].first < 0.5) ++j;
    double mean = 0.0, worst = 0.0;
    for (size_t k = i; k <= j; ++k) {
      mean += values[k].first;
      worst = std::max(worst, values[k].second);
    }
    mean /= double(j - i + 1);
    const double spread = values[j].first - values[i].first;
    rep.eigenvalues.push_back(mean);
    rep.multiplicities.push_back(int(j - i + 1));
    rep.residuals.push_back(std::max(worst, spread));
    i = j + 1;
  }
  return rep;
}

double vacuum_annihilation_residual(const SuperAlgebra& algebra, const SuperState& vacuum, const Grid& grid) {
  const double scale = max_state_abs(vacuum, grid);
  double worst = 0.0;
  for (const SuperCharge& c : algebra.charges) {
    for (const SuperCharge& q : {c, c.adjoint_charge()}) {
      const SuperState r = apply_supercharge(q, vacuum);
      if (r.empty()) continue;
      worst = std::max(worst, max_state_abs(r, grid) / scale);
    }
  }
  return worst;
}

}  // namespace dbx

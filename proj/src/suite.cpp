#include "darboux/suite.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dbx {
namespace {

ResidualReport from_reality(const RealityReport& r, std::string name) {
  ResidualReport rep;
  rep.name = std::move(name);
  rep.max_norm = r.max_spread;
  rep.l2_norm = r.max_spread;
  rep.tolerance = r.tolerance;
  rep.passed = r.passed;
  rep.worst_t = r.worst_t;
  return rep;
}

ClosedFormField as_field(const PotentialField& v) {
  return {v.label, [v](double x, double t, int order) { return v.jet(x, t, order); }};
}

/// max |a - b| / (|a| + |b|) pointwise; suits fields with growing envelopes.
ResidualReport pointwise_agreement(const ClosedFormField& a, const ClosedFormField& b, const Grid& grid,
                                   double tol, std::string name) {
  ResidualReport rep;
  rep.name = std::move(name);
  rep.tolerance = tol;
  double sum_sq = 0.0;
  long count = 0;
  for (double t : grid.t_samples) {
    for (double z : grid.z_nodes) {
      const double x = z * grid.scale(t);
      const Complex av = a.value(x, t);
      const Complex bv = b.value(x, t);
      const double scale = std::abs(av) + std::abs(bv);
      const double d = (scale > 0.0) ? std::abs(av - bv) / scale : 0.0;
      sum_sq += d * d;
      ++count;
      if (d > rep.max_norm) {
        rep.max_norm = d;
        rep.worst_x = x;
        rep.worst_t = t;
      }
    }
  }
  rep.l2_norm = std::sqrt(sum_sq / std::max(count, 1L));
  rep.passed = rep.max_norm <= tol;
  return rep;
}

/// Schrodinger residual measured pointwise against 1 + |f|, for
/// transformation functions whose envelope grows across the grid.
ResidualReport schrodinger_residual_growing(const ClosedFormField& f, const PotentialField& V,
                                            const Grid& grid, double tol, std::string name) {
  ResidualReport rep;
  rep.name = std::move(name);
  rep.tolerance = tol;
  double sum_sq = 0.0;
  long count = 0;
  for (double t : grid.t_samples) {
    for (double z : grid.z_nodes) {
      const double x = z * grid.scale(t);
      const Jet j = f.jet(x, t, 2);
      const Complex res = kI * j.dt() + j.deriv(2).v - Complex(V.value(x, t)) * j.value();
      const double d = std::abs(res) / (1.0 + std::abs(j.value()));
      sum_sq += d * d;
      ++count;
      if (d > rep.max_norm) {
        rep.max_norm = d;
        rep.worst_x = x;
        rep.worst_t = t;
      }
    }
  }
  rep.l2_norm = std::sqrt(sum_sq / std::max(count, 1L));
  rep.passed = rep.max_norm <= tol;
  return rep;
}

/// max |f| / (1 + |ref|) pointwise: kernel residuals relative to the scale of
/// the function the operator was built from.
ResidualReport kernel_residual(const ClosedFormField& f, const ClosedFormField& ref, const Grid& grid,
                               double tol, std::string name) {
  ResidualReport rep;
  rep.name = std::move(name);
  rep.tolerance = tol;
  double sum_sq = 0.0;
  long count = 0;
  for (double t : grid.t_samples) {
    for (double z : grid.z_nodes) {
      const double x = z * grid.scale(t);
      const double d = std::abs(f.value(x, t)) / (1.0 + std::abs(ref.value(x, t)));
      sum_sq += d * d;
      ++count;
      if (d > rep.max_norm) {
        rep.max_norm = d;
        rep.worst_x = x;
        rep.worst_t = t;
      }
    }
  }
  rep.l2_norm = std::sqrt(sum_sq / std::max(count, 1L));
  rep.passed = rep.max_norm <= tol;
  return rep;
}

double gram_identity_deviation(std::span<const ClosedFormField> basis, double t, const Grid& grid,
                               const QuadratureRule& rule) {
  const auto g = gram_matrix(basis, t, grid, rule);
  double dev = 0.0;
  for (size_t j = 0; j < g.size(); ++j)
    for (size_t k = 0; k < g.size(); ++k)
      dev = std::max(dev, std::abs(g[j][k] - ((j == k) ? Complex(1.0) : Complex(0.0))));
  return dev;
}

}  // namespace

std::vector<ResidualReport> run_check_suite(const FreeParticleModel& md) {
  return run_check_suite(md, SuiteSelection{});
}

std::vector<ResidualReport> run_check_suite(const FreeParticleModel& md, const SuiteSelection& sel) {
  std::vector<ResidualReport> out;
  const Grid& grid = md.cfg.grid;
  const int K = md.cfg.states;
  const int n_probe = std::min(4, K);
  QuadratureRule rule;
  rule.convergence_tol = md.cfg.tol_quadrature;

  if (sel.reality) {
    out.push_back(from_reality(check_reality(md.u_m, grid), "reality/" + md.u_m.label));
    out.push_back(from_reality(check_reality(md.v_l, grid), "reality/" + md.v_l.label));
    out.push_back(from_reality(check_reality_n(md.chain, grid), "reality/W2"));
  }

  if (sel.residuals) {
    for (int n = 0; n <= K; ++n)
      out.push_back(schrodinger_residual(md.psi[n], md.V0, grid, md.cfg.tol_analytic,
                                         "residual/" + md.psi[n].label));
    out.push_back(schrodinger_residual_growing(md.u_m, md.V0, grid, md.cfg.tol_analytic,
                                               "residual/" + md.u_m.label));
    out.push_back(schrodinger_residual_growing(md.v_l, md.V1, grid, md.cfg.tol_analytic,
                                               "residual/" + md.v_l.label));
    for (int n = 0; n <= K; ++n)
      out.push_back(schrodinger_residual(md.phi[n], md.V1, grid, md.cfg.tol_analytic,
                                         "residual/" + md.phi[n].label));
    for (int n = 0; n <= K; ++n)
      out.push_back(schrodinger_residual(md.chi[n], md.V2, grid, md.cfg.tol_analytic,
                                         "residual/" + md.chi[n].label));
  }

  if (sel.intertwining) {
    for (int n = 0; n <= n_probe; ++n) {
      out.push_back(schrodinger_residual(apply(md.L01, md.psi[n]), md.V1, grid, md.cfg.tol_analytic,
                                         "intertwining/L01_psi_" + std::to_string(n)));
      out.push_back(schrodinger_residual(apply(md.L12, md.phi[n]), md.V2, grid, md.cfg.tol_analytic,
                                         "intertwining/L12_phi_" + std::to_string(n)));
      out.push_back(schrodinger_residual(apply(md.L02, md.psi[n]), md.V2, grid, md.cfg.tol_analytic,
                                         "intertwining/L02_psi_" + std::to_string(n)));
    }
  }

  if (sel.norms) {
    ResidualReport rep;
    rep.name = "norm/L01_psi_ratio";
    rep.tolerance = md.cfg.tol_quadrature;
    for (int n = 0; n <= std::min(5, K); ++n) {
      const ClosedFormField Lpsi = apply(md.L01, md.psi[n]);
      const double t0 = grid.t_samples.front();
      const double ratio = (inner_product(Lpsi, Lpsi, t0, grid, rule) /
                            inner_product(md.psi[n], md.psi[n], t0, grid, rule))
                               .real();
      const double dev = std::abs(ratio - double(n + md.cfg.m + 1));
      if (dev > rep.max_norm) {
        rep.max_norm = dev;
        rep.worst_t = t0;
      }
    }
    rep.l2_norm = rep.max_norm;
    rep.passed = rep.max_norm <= rep.tolerance;
    out.push_back(rep);
  }

  if (sel.factorizations) {
    std::vector<ClosedFormField> low(md.psi.begin(), md.psi.begin() + n_probe + 1);
    std::vector<ClosedFormField> mid(md.phi.begin(), md.phi.begin() + n_probe + 1);
    std::vector<ClosedFormField> high(md.chi.begin(), md.chi.begin() + n_probe + 1);
    out.push_back(verify_factorization(md.chain, 0, 1, low, mid, grid, 1e-7));
    out.push_back(verify_factorization(md.chain, 0, 2, low, high, grid, 1e-7));
    out.push_back(verify_factorization(md.chain, 1, 1, mid, high, grid, 1e-7));
  }

  if (sel.algebra) {
    std::vector<SuperState> probes;
    for (int n = 0; n <= n_probe; ++n) {
      probes.push_back(single_component_state(0, md.psi[n]));
      probes.push_back(single_component_state(1, md.phi[n]));
      probes.push_back(single_component_state(2, md.chi[n]));
    }
    for (ResidualReport& r : verify_algebra(md.algebra, probes, grid, 1e-7)) out.push_back(std::move(r));
  }

  if (sel.orthonormality) {
    for (double t : {0.0, 2.0}) {
      const auto tag = [t](const char* base) {
        return std::string("orthonormality/") + base + "@t=" + ((t == 0.0) ? "0" : "2");
      };
      const std::array<std::pair<const std::vector<ClosedFormField>*, const char*>, 3> bases = {
          {{&md.psi, "psi"}, {&md.phi, "phi"}, {&md.chi, "chi"}}};
      for (const auto& [basis, nm] : bases) {
        ResidualReport rep;
        rep.name = tag(nm);
        rep.tolerance = md.cfg.tol_quadrature;
        rep.max_norm = gram_identity_deviation(*basis, t, grid, rule);
        rep.l2_norm = rep.max_norm;
        rep.worst_t = t;
        rep.passed = rep.max_norm <= rep.tolerance;
        out.push_back(rep);
      }
    }
  }

  if (sel.spectrum) {
    const SpectrumReport sp = spectrum_report(md.cfg.m, md.cfg.l, std::max(K, 3), grid, rule);
    ResidualReport rep;
    rep.name = "spectrum/pattern";
    rep.tolerance = md.cfg.tol_quadrature;
    std::vector<double> expected = {-(md.cfg.l + 0.5), -(md.cfg.m + 0.5)};
    std::vector<int> expected_mult = {1, 2};
    for (int n = 0; n + 3 <= std::max(K, 3); ++n) {
      expected.push_back(n + 0.5);
      expected_mult.push_back(3);
    }
    if (sp.eigenvalues.size() != expected.size() ||
        !std::equal(expected_mult.begin(), expected_mult.end(), sp.multiplicities.begin())) {
      rep.max_norm = 1.0;
      rep.passed = false;
    } else {
      for (size_t i = 0; i < expected.size(); ++i)
        rep.max_norm = std::max(rep.max_norm, std::abs(sp.eigenvalues[i] - expected[i]));
      rep.passed = rep.max_norm <= rep.tolerance;
    }
    rep.l2_norm = rep.max_norm;
    out.push_back(rep);

    ResidualReport vac;
    vac.name = "spectrum/vacuum_annihilation";
    vac.tolerance = 1e-8;
    vac.max_norm = vacuum_annihilation_residual(md.algebra, single_component_state(2, md.chi[0]), grid);
    vac.l2_norm = vac.max_norm;
    vac.passed = vac.max_norm <= vac.tolerance;
    out.push_back(vac);
  }

  if (sel.conservation) {
    const auto potentials = md.level_potentials();
    out.push_back(conservation_check(md.algebra.charge(0, 1),
                                     single_component_state(0, md.psi[std::min(2, K)]), potentials, grid,
                                     1e-7));
    out.push_back(conservation_check(md.algebra.charge(0, 2), single_component_state(0, md.psi[0]),
                                     potentials, grid, 1e-7));
  }

  if (sel.oracles) {
    const ClosedFormField v1 = as_field(md.V1);
    const ClosedFormField a01{"A01[u]", [u = md.u_m](double x, double t, int o) {
                                return potential_difference_jet(u, x, t, o);
                              }};
    out.push_back(field_agreement(v1, a01, grid, 1e-8, "oracle/v1_vs_logmod"));

    const ClosedFormField v2 = as_field(md.V2);
    const ClosedFormField v1_plus_a12{"V1+A12[v]", [v1e = md.V1.eval, v = md.v_l](double x, double t, int o) {
                                        return v1e(x, t, o) + potential_difference_jet(v, x, t, o);
                                      }};
    out.push_back(field_agreement(v2, v1_plus_a12, grid, 1e-8, "oracle/v2_vs_step_logmod"));
    const ClosedFormField a02{"A02[W]", [chain = md.chain](double x, double t, int o) {
                                return potential_difference_n_jet(chain, x, t, o);
                              }};
    out.push_back(field_agreement(v2, a02, grid, 1e-8, "oracle/v2_vs_chain_logmod"));

    ResidualReport crum;
    crum.name = "oracle/crum_vs_composition";
    crum.tolerance = 1e-8;
    crum.passed = true;
    for (int n = 0; n <= std::min(5, K); ++n) {
      const ClosedFormField det = apply_determinant(md.L02, md.psi[n]);
      const ClosedFormField comp = apply(md.L12, apply(md.L01, md.psi[n]));
      const ResidualReport r = field_agreement(det, comp, grid, 1e-8, crum.name);
      if (r.max_norm > crum.max_norm) {
        crum.max_norm = r.max_norm;
        crum.worst_x = r.worst_x;
        crum.worst_t = r.worst_t;
      }
      crum.passed = crum.passed && r.passed;
    }
    crum.l2_norm = crum.max_norm;
    out.push_back(crum);

    out.push_back(pointwise_agreement(wronskian_field({md.u_m, md.u_l}),
                                      fields::wronskian_uu_closed_form(md.cfg.m, md.cfg.l), grid, 1e-8,
                                      "oracle/wronskian_closed_form"));

    out.push_back(kernel_residual(apply(md.L01, md.u_m), md.u_m, grid, 1e-10, "oracle/kernel_L01_u"));
    out.push_back(kernel_residual(apply(md.L12.adjoint_op(), kernel_partner(md.L12)), kernel_partner(md.L12),
                                  grid, 1e-9, "oracle/kernel_L12adj_v"));
  }

  return out;
}

}  // namespace dbx

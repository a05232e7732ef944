#include "darboux/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dbx {

Grid Grid::make(double z_max, int n_x, std::vector<double> t_samples) {
  if (z_max < 8.0) throw std::invalid_argument("grid z_max must be >= 8");
  if (n_x < 257 || n_x % 2 == 0) throw std::invalid_argument("grid n_x must be odd and >= 257");
  if (t_samples.empty()) throw std::invalid_argument("grid needs at least one t sample");
  Grid g;
  g.z_max = z_max;
  g.n_x = n_x;
  g.t_samples = std::move(t_samples);
  g.z_nodes.resize(n_x);
  const double h = 2.0 * z_max / (n_x - 1);
  for (int i = 0; i < n_x; ++i) g.z_nodes[i] = -z_max + h * i;
  g.z_nodes[(n_x - 1) / 2] = 0.0;
  return g;
}

IntegralResult integrate(const std::function<Complex(double x)>& f, double t, const Grid& grid,
                         const QuadratureRule& rule, const std::string& what) {
  const int n = grid.n_x;
  const double s = grid.scale(t);
  const double hx = (grid.z_nodes[1] - grid.z_nodes[0]) * s;
  std::vector<Complex> vals(n);
  double max_abs = 0.0;
  for (int i = 0; i < n; ++i) {
    vals[i] = f(grid.z_nodes[i] * s);
    max_abs = std::max(max_abs, std::abs(vals[i]));
  }
  const double edge = std::max(std::abs(vals[0]), std::abs(vals[n - 1]));
  if (max_abs > 0.0 && edge > rule.decay_threshold * max_abs)
    throw std::runtime_error("integrand for " + what + " does not decay at the domain boundary: |edge|/max = " +
                             std::to_string(edge / max_abs) + " at t = " + std::to_string(t));

  IntegralResult r;
  Complex full = 0.5 * (vals[0] + vals[n - 1]);
  for (int i = 1; i < n - 1; ++i) full += vals[i];
  r.value = full * hx;
  Complex half = 0.5 * (vals[0] + vals[n - 1]);
  for (int i = 2; i < n - 1; i += 2) half += vals[i];
  r.half_value = half * (2.0 * hx);
  return r;
}

Complex inner_product(const ClosedFormField& f, const ClosedFormField& g, double t, const Grid& grid,
                      const QuadratureRule& rule) {
  const std::string what = "<" + f.label + ", " + g.label + ">";
  const IntegralResult r = integrate(
      [&](double x) { return std::conj(f.value(x, t)) * g.value(x, t); }, t, grid, rule, what);
  if (r.gap() > rule.convergence_tol * (1.0 + std::abs(r.value)))
    throw std::runtime_error("quadrature for " + what + " did not converge: half-resolution gap " +
                             std::to_string(r.gap()));
  return r.value;
}

std::vector<std::vector<Complex>> gram_matrix(std::span<const ClosedFormField> basis, double t,
                                              const Grid& grid, const QuadratureRule& rule) {
  const int n = grid.n_x;
  const int k = int(basis.size());
  const double s = grid.scale(t);
  const double hx = (grid.z_nodes[1] - grid.z_nodes[0]) * s;
  std::vector<std::vector<Complex>> vals(k, std::vector<Complex>(n));
  for (int a = 0; a < k; ++a)
    for (int i = 0; i < n; ++i) vals[a][i] = basis[a].value(grid.z_nodes[i] * s, t);

  std::vector<std::vector<Complex>> gram(k, std::vector<Complex>(k));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      Complex full = 0.5 * (std::conj(vals[a][0]) * vals[b][0] + std::conj(vals[a][n - 1]) * vals[b][n - 1]);
      for (int i = 1; i < n - 1; ++i) full += std::conj(vals[a][i]) * vals[b][i];
      Complex half = 0.5 * (std::conj(vals[a][0]) * vals[b][0] + std::conj(vals[a][n - 1]) * vals[b][n - 1]);
      for (int i = 2; i < n - 1; i += 2) half += std::conj(vals[a][i]) * vals[b][i];
      const Complex value = full * hx;
      if (std::abs(value - half * 2.0 * hx) > rule.convergence_tol * (1.0 + std::abs(value)))
        throw std::runtime_error("gram quadrature did not converge for <" + basis[a].label + ", " +
                                 basis[b].label + ">");
      gram[a][b] = value;
    }
  }
  return gram;
}

ResidualReport schrodinger_residual(const ClosedFormField& f, const PotentialField& V, const Grid& grid,
                                    double tolerance, std::string name) {
  ResidualReport rep;
  rep.name = name.empty() ? ("schrodinger/" + f.label + "/" + V.label) : std::move(name);
  rep.tolerance = tolerance;
  double max_f = 0.0;
  double sum_sq = 0.0;
  long count = 0;
  for (double t : grid.t_samples) {
    for (double z : grid.z_nodes) {
      const double x = z * grid.scale(t);
      const Jet j = f.jet(x, t, 2);
      const Complex val = j.value();
      const Complex res = kI * j.dt() + j.deriv(2).v - Complex(V.value(x, t)) * val;
      max_f = std::max(max_f, std::abs(val));
      const double a = std::abs(res);
      sum_sq += a * a;
      ++count;
      if (a > rep.max_norm) {
        rep.max_norm = a;
        rep.worst_x = x;
        rep.worst_t = t;
      }
    }
  }
  if (max_f > 0.0) {
    rep.max_norm /= max_f;
    rep.l2_norm = std::sqrt(sum_sq / double(count)) / max_f;
  }
  rep.passed = rep.max_norm <= tolerance;
  return rep;
}

FdReport fd_check(const ClosedFormField& f, const Grid& grid, double h, double min_order) {
  FdReport rep;
  const int stride = std::max(1, grid.n_x / 16);
  double e1x = 0.0, e2x = 0.0, e1xx = 0.0, e2xx = 0.0, e1t = 0.0, e2t = 0.0;
  double scale = 0.0;
  for (double t : grid.t_samples) {
    for (int i = stride / 2; i < grid.n_x; i += stride) {
      const double x = grid.x_at(i, t);
      const Jet j = f.jet(x, t, 2);
      scale = std::max({scale, std::abs(j.value()), std::abs(j.deriv(1).v), std::abs(j.deriv(2).v)});
      const auto val = [&](double xx, double tt) { return f.value(xx, tt); };
      for (int lvl = 0; lvl < 2; ++lvl) {
        const double hh = (lvl == 0) ? h : h / 2.0;
        const Complex fd_x = (val(x + hh, t) - val(x - hh, t)) / (2.0 * hh);
        const Complex fd_xx = (val(x + hh, t) - 2.0 * val(x, t) + val(x - hh, t)) / (hh * hh);
        const Complex fd_t = (val(x, t + hh) - val(x, t - hh)) / (2.0 * hh);
        const double ex = std::abs(fd_x - j.deriv(1).v);
        const double exx = std::abs(fd_xx - j.deriv(2).v);
        const double et = std::abs(fd_t - j.dt());
        if (lvl == 0) {
          e1x += ex;
          e1xx += exx;
          e1t += et;
        } else {
          e2x += ex;
          e2xx += exx;
          e2t += et;
        }
      }
    }
  }
  // A vanishing fine-step error (constant fields) counts as converged.
  const double floor_err = 1e-13 * (1.0 + scale);
  const auto order_of = [&](double e1, double e2) {
    if (e2 <= floor_err) return 2.0;
    return std::log2(e1 / e2);
  };
  rep.order_dx = order_of(e1x, e2x);
  rep.order_dxx = order_of(e1xx, e2xx);
  rep.order_dt = order_of(e1t, e2t);
  rep.max_rel_err = std::max({e2x, e2xx, e2t}) / (1.0 + scale);
  rep.passed = rep.order_dx >= min_order && rep.order_dxx >= min_order && rep.order_dt >= min_order;
  return rep;
}

NodelessnessReport nodelessness(const ClosedFormField& f, const Grid& grid, double threshold) {
  NodelessnessReport rep;
  rep.threshold = threshold;
  rep.min_local_ratio = 1.0;
  rep.min_abs = std::numeric_limits<double>::infinity();
  const int window = std::max(4, grid.n_x / 64);
  for (double t : grid.t_samples) {
    std::vector<double> mags(grid.n_x);
    for (int i = 0; i < grid.n_x; ++i) mags[i] = std::abs(f.value(grid.x_at(i, t), t));
    for (int i = 0; i < grid.n_x; ++i) {
      rep.min_abs = std::min(rep.min_abs, mags[i]);
      rep.max_abs = std::max(rep.max_abs, mags[i]);
      double local = 0.0;
      for (int j = std::max(0, i - window); j <= std::min(grid.n_x - 1, i + window); ++j)
        local = std::max(local, mags[j]);
      const double ratio = (local > 0.0) ? mags[i] / local : 0.0;
      if (ratio < rep.min_local_ratio) {
        rep.min_local_ratio = ratio;
        rep.worst_x = grid.x_at(i, t);
        rep.worst_t = t;
      }
    }
  }
  rep.passed = rep.min_local_ratio > threshold;
  return rep;
}

}  // namespace dbx

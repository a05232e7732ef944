#include "darboux/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "darboux/specfun.hpp"

namespace dbx::fields {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double inv_sqrt_factorial(int n) { return std::exp(-0.5 * std::lgamma(n + 1.0)); }

struct TimeParts {
  TScalar tv;       // t with dt seed
  TScalar one_t2;   // 1 + t^2
  TScalar amp4;     // (1+t^2)^{-1/4}
  TScalar inv_s;    // (1+t^2)^{-1/2}
};

TimeParts time_parts(double t) {
  TimeParts p;
  p.tv = t_variable(t);
  p.one_t2 = 1.0 + p.tv * p.tv;
  p.amp4 = pow(p.one_t2, -0.25);
  p.inv_s = pow(p.one_t2, -0.5);
  return p;
}

}  // namespace

void validate_model_indices(int m, int l) {
  if (m < 0 || m % 2 != 0)
    throw std::invalid_argument("m must be even and non-negative (odd transformation functions vanish at x = 0), got m = " +
                                std::to_string(m));
  if (l <= m || (l - m) % 2 != 1)
    throw std::invalid_argument("l must lie in {m+1, m+3, ...}, got (m, l) = (" + std::to_string(m) + ", " +
                                std::to_string(l) + ")");
  specfun::validate_degree(l + 1);
}

ClosedFormField psi_basis(int n) {
  specfun::validate_degree(n);
  const double norm = std::pow(kTwoPi, -0.25) * inv_sqrt_factorial(n);
  return {"psi_" + std::to_string(n), [n, norm](double x, double t, int order) {
            const TimeParts p = time_parts(t);
            const Jet X = Jet::variable(x, order);
            const Jet Z = X * p.inv_s;
            // exponent: i x^2 t / (4(1+t^2)) - z^2/4 - i(n+1/2) arctan t
            Jet expo = X * X * (TScalar(kI) * p.tv / (4.0 * p.one_t2)) - Z * Z * TScalar(0.25);
            expo = expo + arctan_t(t) * TScalar(-kI * (n + 0.5));
            return exp(expo) * specfun::hermite_jet(n, Z) * (p.amp4 * TScalar(norm));
          }};
}

ClosedFormField u_eigenfunction(int k) {
  specfun::validate_degree(k);
  return {"u_" + std::to_string(k), [k](double x, double t, int order) {
            const TimeParts p = time_parts(t);
            const Jet X = Jet::variable(x, order);
            const Jet Z = X * p.inv_s;
            Jet expo = X * X * (TScalar(kI) * p.tv / (4.0 * p.one_t2)) + Z * Z * TScalar(0.25);
            expo = expo + arctan_t(t) * TScalar(kI * (k + 0.5));
            return exp(expo) * specfun::hermite_jet(k, Z * TScalar(kI)) * p.amp4;
          }};
}

ClosedFormField u_transform(int m) {
  if (m < 0 || m % 2 != 0)
    throw std::invalid_argument("u_transform requires even m (odd ones are equal to zero at x = 0), got m = " +
                                std::to_string(m));
  return u_eigenfunction(m);
}

ClosedFormField v_partner(int m, int l) {
  validate_model_indices(m, l);
  return {"v_" + std::to_string(l), [m, l](double x, double t, int order) {
            const TimeParts p = time_parts(t);
            const Jet X = Jet::variable(x, order);
            const Jet Z = X * p.inv_s;
            // (1-it)^{-1/2} = (1+t^2)^{-1/4} exp(i arctan(t)/2)
            const TScalar pref = p.amp4 * rotation_phase(0.5, t);
            // x^2/(4-4it) = x^2 (1+it)/(4(1+t^2))
            Jet expo = X * X * ((1.0 + TScalar(kI) * p.tv) / (4.0 * p.one_t2));
            expo = expo + arctan_t(t) * TScalar(kI * double(l));
            return exp(expo) * specfun::f_ml_jet(m, l, Z) / specfun::hermite_jet(m, Z * TScalar(kI)) * pref;
          }};
}

ClosedFormField phi_state(int k, int m) {
  if (m < 0 || m % 2 != 0)
    throw std::invalid_argument("phi_state requires even m, got " + std::to_string(m));
  if (k < 0) throw std::invalid_argument("phi_state index must be >= 0");
  if (k == 0) {
    // sqrt(m!) (2pi)^{-1/4} / (L1(t) u_m^*), L1 = sqrt(1+t^2)
    const double norm = std::exp(0.5 * std::lgamma(m + 1.0)) * std::pow(kTwoPi, -0.25);
    const ClosedFormField um = u_transform(m);
    return {"phi_0", [norm, um](double x, double t, int order) {
              const TimeParts p = time_parts(t);
              const Jet denom = um.jet(x, t, order).conjugated() * pow(p.one_t2, 0.5);
              return Jet::constant(norm, order) / denom;
            }};
  }
  const int n = k - 1;
  specfun::validate_degree(n + 1);
  const double norm = inv_sqrt_factorial(n) / std::sqrt(double(n + m + 1)) * std::pow(kTwoPi, -0.25);
  return {"phi_" + std::to_string(k), [n, m, norm](double x, double t, int order) {
            const TimeParts p = time_parts(t);
            const Jet X = Jet::variable(x, order);
            const Jet Z = X * p.inv_s;
            // (1+it)^{-1/2} = (1+t^2)^{-1/4} exp(-i arctan(t)/2)
            const TScalar pref = p.amp4 * rotation_phase(-0.5, t) * TScalar(norm);
            // -x^2/(4+4it) = -x^2 (1-it)/(4(1+t^2))
            Jet expo = X * X * ((TScalar(kI) * p.tv - 1.0) / (4.0 * p.one_t2));
            expo = expo + arctan_t(t) * TScalar(-kI * double(n));
            Jet bracket = specfun::hermite_jet(n + 1, Z);
            if (m > 0) {
              const Jet W = Z * TScalar(kI);
              bracket += specfun::hermite_jet(n, Z) * specfun::hermite_jet(m - 1, W) /
                         specfun::hermite_jet(m, W) * TScalar(kI * double(m));
            }
            return exp(expo) * bracket * pref;
          }};
}

ClosedFormField chi_state(int k, int m, int l) {
  validate_model_indices(m, l);
  if (k < 0) throw std::invalid_argument("chi_state index must be >= 0");
  if (k <= 1) {
    const int deg = (k == 0) ? m : l;
    const double fac = (k == 0) ? std::lgamma(l + 1.0) : std::lgamma(m + 1.0);
    const double norm = std::exp(0.5 * (fac + std::log(double(l - m)) - 0.5 * std::log(kTwoPi)));
    const double mu = (k == 0) ? double(l) : double(m);
    return {"chi_" + std::to_string(k), [m, l, deg, norm, mu](double x, double t, int order) {
              const TimeParts p = time_parts(t);
              const Jet X = Jet::variable(x, order);
              const Jet Z = X * p.inv_s;
              const TScalar pref = p.amp4 * rotation_phase(0.5, t) * TScalar(norm);
              Jet expo = X * X * ((TScalar(kI) * p.tv - 1.0) / (4.0 * p.one_t2));
              expo = expo + arctan_t(t) * TScalar(kI * mu);
              return exp(expo) * specfun::hermite_jet(deg, Z * TScalar(kI)) / specfun::f_ml_jet(m, l, Z) * pref;
            }};
  }
  // chi_{n+2} from the Wronskian-ratio expression.  The state entering the
  // leading term and the first Wronskian slot is the free-level basis
  // function psi_n: with it the two terms carry the same arctan-t phase and
  // the combination solves the level-2 equation, matching the normalized
  // level-2 operator image of phi_{n+1} up to a constant unit phase.
  const int n = k - 2;
  const ClosedFormField psin = psi_basis(n);
  const ClosedFormField um = u_transform(m);
  const ClosedFormField ul = u_eigenfunction(l);
  const double norm = 1.0 / std::sqrt(double(n + l + 1) * double(n + m + 1));
  return {"chi_" + std::to_string(k), [norm, l, n, m, psin, um, ul](double x, double t, int order) {
            const Jet jpsi = psin.jet(x, t, order + 1);
            const Jet jum = um.jet(x, t, order + 1);
            const Jet jul = ul.jet(x, t, order + 1);
            const Jet w_psi_ul = jpsi * jul.derivative() - jpsi.derivative() * jul;
            const Jet w_um_ul = jum * jul.derivative() - jum.derivative() * jul;
            Jet bracket = jpsi.truncated(order) * TScalar(-double(l + n + 1));
            bracket += jum * (w_psi_ul / w_um_ul) * TScalar(double(l - m));
            return bracket * TScalar(norm);
          }};
}

PotentialField potential_v1(int m) {
  if (m < 0 || m % 2 != 0)
    throw std::invalid_argument("potential_v1 requires even m, got " + std::to_string(m));
  PotentialField V;
  V.label = "V1[m=" + std::to_string(m) + "]";
  V.order = 1;
  V.m = m;
  V.eval = [m](double x, double t, int order) {
    const TimeParts p = time_parts(t);
    const Jet W = Jet::variable(x, order) * p.inv_s * TScalar(kI);
    Jet bracket = Jet::constant(-1.0, order);
    if (m >= 1) {
      const Jet hm = specfun::hermite_jet(m, W);
      if (m >= 2)
        bracket += specfun::hermite_jet(m - 2, W) / hm * TScalar(2.0 * m * (m - 1));
      const Jet ratio = specfun::hermite_jet(m - 1, W) / hm;
      bracket -= ratio * ratio * TScalar(2.0 * double(m) * double(m));
    }
    return bracket / p.one_t2;
  };
  return V;
}

PotentialField potential_v2(int m, int l) {
  validate_model_indices(m, l);
  PotentialField V;
  V.label = "V2[m=" + std::to_string(m) + ",l=" + std::to_string(l) + "]";
  V.order = 2;
  V.m = m;
  V.l = l;
  V.eval = [m, l](double x, double t, int order) {
    const TimeParts p = time_parts(t);
    const Jet Z = Jet::variable(x, order + 2) * p.inv_s;
    // -2(1+t^2)^{-1} [1 + f''/f - (f'/f)^2] with z-derivatives; the bracket
    // minus one equals (1+t^2) (log f)_xx in x.
    const Jet ddlog = log(specfun::f_ml_jet(m, l, Z)).derivative().derivative();
    return (ddlog * p.one_t2 + 1.0) * (TScalar(-2.0) / p.one_t2);
  };
  return V;
}

ClosedFormField wronskian_uu_closed_form(int m, int l) {
  validate_model_indices(m, l);
  return {"W(u_" + std::to_string(m) + ",u_" + std::to_string(l) + ")",
          [m, l](double x, double t, int order) {
            const TimeParts p = time_parts(t);
            const Jet X = Jet::variable(x, order);
            const Jet Z = X * p.inv_s;
            // ((1-it) sqrt(1+t^2))^{-1} = exp(i arctan t)/(1+t^2)
            const TScalar pref = rotation_phase(1.0, t) / p.one_t2;
            // x^2/(2-2it) = x^2 (1+it)/(2(1+t^2))
            Jet expo = X * X * ((1.0 + TScalar(kI) * p.tv) / (2.0 * p.one_t2));
            expo = expo + arctan_t(t) * TScalar(kI * double(m + l));
            return exp(expo) * specfun::f_ml_jet(m, l, Z) * pref;
          }};
}

SymmetryOp symmetry_op(int level, int m, int l) {
  if (level < 0 || level > 2) throw std::invalid_argument("symmetry_op level must be 0, 1 or 2");
  SymmetryOp op;
  op.level = level;
  if (level == 0) return op;
  const PotentialField V = (level == 1) ? potential_v1(m) : potential_v2(m, l);
  op.shift = [V](double x, double t, int order) {
    const TScalar one_t2 = 1.0 + t_variable(t) * t_variable(t);
    return V.jet(x, t, order) * one_t2;
  };
  return op;
}

SymmetryOp symmetry_from_shift(int level, JetEval shift) { return {level, std::move(shift)}; }

Jet g0_apply(const Jet& f, double x, double t) {
  const TScalar tv = t_variable(t);
  const TScalar one_t2 = 1.0 + tv * tv;
  const int k = f.order() - 2;
  const Jet X = Jet::variable(x, k);
  const Jet fx = f.derivative();
  const Jet fxx = fx.derivative();
  Jet r = fxx * (TScalar(kI) * one_t2);
  r += X * fx * tv;
  r += f * (tv * 0.5);
  r -= X * X * f * TScalar(0.25 * kI);
  return r;
}

Jet apply_symmetry_jet(const SymmetryOp& op, const JetEval& f, double x, double t, int order) {
  const Jet fj = f(x, t, order + 2);
  Jet r = g0_apply(fj, x, t);
  if (op.shift) r -= op.shift(x, t, order) * fj * TScalar(kI);
  return r;
}

Complex apply_symmetry(const SymmetryOp& op, const ClosedFormField& f, double x, double t) {
  return apply_symmetry_jet(op, f.eval, x, t, 0).value();
}

ClosedFormField apply_symmetry_field(const SymmetryOp& op, const ClosedFormField& f) {
  return {"g" + std::to_string(op.level) + "(" + f.label + ")",
          [op, inner = f.eval](double x, double t, int order) {
            return apply_symmetry_jet(op, inner, x, t, order);
          }};
}

}  // namespace dbx::fields

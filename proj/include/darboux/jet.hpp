#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace dbx {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Thrown when an evaluation requests more x-derivatives than a field can
/// supply (e.g. after too many operator compositions).
struct ShallowTowerError : std::logic_error {
  explicit ShallowTowerError(const std::string& msg) : std::logic_error(msg) {}
};

/// Thrown when a division runs into a (near-)node of the denominator.
struct NodeProximityError : std::runtime_error {
  NodeProximityError(double x_, double t_, const std::string& msg)
      : std::runtime_error(msg + " at (x=" + std::to_string(x_) +
                           ", t=" + std::to_string(t_) + ")"),
        x(x_),
        t(t_) {}
  double x;
  double t;
};

/// A value together with its partial derivative with respect to t.
/// Every quantity assembled from TScalar seeds carries an analytic time
/// derivative through all arithmetic.
struct TScalar {
  Complex v{};
  Complex dt{};

  TScalar() = default;
  TScalar(double a) : v(a) {}   // NOLINT: implicit on purpose
  TScalar(Complex a) : v(a) {}  // NOLINT: implicit on purpose
  TScalar(Complex a, Complex da) : v(a), dt(da) {}

  TScalar& operator+=(const TScalar& o) {
    v += o.v;
    dt += o.dt;
    return *this;
  }
  TScalar& operator-=(const TScalar& o) {
    v -= o.v;
    dt -= o.dt;
    return *this;
  }
  TScalar& operator*=(const TScalar& o) {
    dt = dt * o.v + v * o.dt;
    v *= o.v;
    return *this;
  }
  TScalar& operator/=(const TScalar& o) {
    dt = (dt * o.v - v * o.dt) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
};

inline TScalar operator+(TScalar a, const TScalar& b) { return a += b; }
inline TScalar operator-(TScalar a, const TScalar& b) { return a -= b; }
inline TScalar operator*(TScalar a, const TScalar& b) { return a *= b; }
inline TScalar operator/(TScalar a, const TScalar& b) { return a /= b; }
inline TScalar operator-(const TScalar& a) { return {-a.v, -a.dt}; }

/// The time variable itself, seeded with dt = 1.
inline TScalar t_variable(double t) { return {Complex(t), Complex(1.0)}; }

inline TScalar exp(const TScalar& a) {
  const Complex e = std::exp(a.v);
  return {e, e * a.dt};
}
inline TScalar log(const TScalar& a) { return {std::log(a.v), a.dt / a.v}; }
inline TScalar sqrt(const TScalar& a) {
  const Complex r = std::sqrt(a.v);
  return {r, a.dt / (2.0 * r)};
}
inline TScalar pow(const TScalar& a, double p) {
  const Complex w = std::pow(a.v, p);
  return {w, p * w / a.v * a.dt};
}
inline TScalar conj(const TScalar& a) { return {std::conj(a.v), std::conj(a.dt)}; }

/// arctan of the (real) time variable.
inline TScalar arctan_t(double t) { return {std::atan(t), 1.0 / (1.0 + t * t)}; }

/// exp(i * mu * arctan t).  For mu = 1 this equals sqrt((1+it)/(1-it)) on the
/// principal branch; constructing it from arctan keeps the modulus exactly 1.
inline TScalar rotation_phase(double mu, double t) {
  const double th = mu * std::atan(t);
  const Complex e{std::cos(th), std::sin(th)};
  return {e, kI * mu / (1.0 + t * t) * e};
}

/// Truncated Taylor expansion in x about a point: coeff(j) = d^j f/dx^j / j!.
/// Coefficients are TScalar, so a jet also carries the analytic t-derivative
/// of the value and of every x-derivative it holds.
class Jet {
 public:
  static constexpr int kMaxOrder = 11;

  explicit Jet(int order) : n_(order + 1) {
    if (order < 0 || order > kMaxOrder)
      throw ShallowTowerError("jet order " + std::to_string(order) +
                              " outside [0," + std::to_string(kMaxOrder) + "]");
  }

  static Jet variable(Complex x, int order) {
    Jet j(order);
    j.c_[0] = TScalar(x);
    if (order >= 1) j.c_[1] = TScalar(1.0);
    return j;
  }
  static Jet constant(const TScalar& a, int order) {
    Jet j(order);
    j.c_[0] = a;
    return j;
  }

  int order() const { return n_ - 1; }
  const TScalar& coeff(int j) const {
    check(j);
    return c_[j];
  }
  TScalar& coeff(int j) {
    check(j);
    return c_[j];
  }

  /// d^j f/dx^j with its t-derivative (j! * Taylor coefficient).
  TScalar deriv(int j) const {
    check(j);
    return c_[j] * factorial(j);
  }
  Complex value() const { return c_[0].v; }
  Complex dt() const { return c_[0].dt; }

  /// The x-derivative as a jet one order lower.
  Jet derivative() const {
    if (n_ < 2) throw ShallowTowerError("derivative of an order-0 jet");
    Jet r(order() - 1);
    for (int j = 0; j + 1 < n_; ++j) r.c_[j] = c_[j + 1] * double(j + 1);
    return r;
  }

  Jet conjugated() const {
    Jet r = *this;
    for (int j = 0; j < n_; ++j) r.c_[j] = conj(r.c_[j]);
    return r;
  }

  Jet truncated(int order) const {
    if (order > this->order()) throw ShallowTowerError("truncated() cannot extend a jet");
    Jet r(order);
    for (int j = 0; j <= order; ++j) r.c_[j] = c_[j];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    n_ = std::min(n_, o.n_);
    for (int j = 0; j < n_; ++j) c_[j] += o.c_[j];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    n_ = std::min(n_, o.n_);
    for (int j = 0; j < n_; ++j) c_[j] -= o.c_[j];
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(const Jet& a) {
    Jet r(a.order());
    for (int j = 0; j < a.n_; ++j) r.c_[j] = -a.c_[j];
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order(), b.order()));
    for (int j = 0; j < r.n_; ++j) {
      TScalar s;
      for (int i = 0; i <= j; ++i) s += a.c_[i] * b.c_[j - i];
      r.c_[j] = s;
    }
    return r;
  }

  /// Cauchy division; the caller is responsible for node guarding.
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order(), b.order()));
    for (int j = 0; j < r.n_; ++j) {
      TScalar s = a.c_[j];
      for (int i = 1; i <= j; ++i) s -= b.c_[i] * r.c_[j - i];
      r.c_[j] = s / b.c_[0];
    }
    return r;
  }

  friend Jet operator*(const Jet& a, const TScalar& s) {
    Jet r(a.order());
    for (int j = 0; j < a.n_; ++j) r.c_[j] = a.c_[j] * s;
    return r;
  }
  friend Jet operator*(const TScalar& s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, const TScalar& s) {
    Jet r(a.order());
    for (int j = 0; j < a.n_; ++j) r.c_[j] = a.c_[j] / s;
    return r;
  }
  friend Jet operator+(Jet a, const TScalar& s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(const TScalar& s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, const TScalar& s) {
    a.c_[0] -= s;
    return a;
  }

  friend Jet exp(const Jet& u) {
    Jet e(u.order());
    e.c_[0] = exp(u.c_[0]);
    for (int k = 1; k < u.n_; ++k) {
      TScalar s;
      for (int j = 1; j <= k; ++j) s += u.c_[j] * double(j) * e.c_[k - j];
      e.c_[k] = s / double(k);
    }
    return e;
  }

  friend Jet log(const Jet& u) {
    Jet w(u.order());
    w.c_[0] = log(u.c_[0]);
    for (int k = 1; k < u.n_; ++k) {
      TScalar s = u.c_[k] * double(k);
      for (int j = 1; j < k; ++j) s -= w.c_[j] * double(j) * u.c_[k - j];
      w.c_[k] = s / u.c_[0] / double(k);
    }
    return w;
  }

 private:
  static double factorial(int j) {
    double f = 1.0;
    for (int i = 2; i <= j; ++i) f *= i;
    return f;
  }
  void check(int j) const {
    if (j < 0 || j >= n_)
      throw ShallowTowerError("derivative tower too shallow: coefficient " +
                              std::to_string(j) + " of an order-" +
                              std::to_string(n_ - 1) + " jet");
  }

  std::array<TScalar, kMaxOrder + 1> c_{};
  int n_;
};

}  // namespace dbx

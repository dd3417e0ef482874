#pragma once

// Exact scalars: GMP rationals and elements of the cyclotomic fields Q(zeta_m).

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace rspin {

using Rational = mpq_class;

Rational parse_rational(std::string_view text);
/// p/q in lowest terms (mpq_class(p, q) alone does not canonicalize).
inline Rational frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}
std::string to_string(const Rational& q);
inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
Rational factorial(int n);
Rational binomial(const Rational& a, int j);

class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The field Q(zeta_m) in the power basis 1, zeta, ..., zeta^{phi(m)-1}.
/// Instances are interned: `CyclotomicField::get(m)` always returns the same
/// object for the same m, so fields compare by address.
class CyclotomicField {
 public:
  static const CyclotomicField& get(int order);

  int order() const { return order_; }
  int degree() const { return static_cast<int>(modulus_.size()) - 1; }
  /// Coefficients of the m-th cyclotomic polynomial, constant term first.
  const std::vector<Rational>& modulus() const { return modulus_; }
  /// Reduced power-basis coordinates of zeta^k, k taken mod m.
  const std::vector<Rational>& zeta_power(int k) const;

  CyclotomicField(const CyclotomicField&) = delete;
  CyclotomicField& operator=(const CyclotomicField&) = delete;

 private:
  explicit CyclotomicField(int order);

  int order_;
  std::vector<Rational> modulus_;
  std::vector<std::vector<Rational>> powers_;
};

/// Integer coefficients of Phi_m, constant term first, computed by exact
/// division of x^m - 1 by Phi_d for the proper divisors d of m.
std::vector<Rational> cyclotomic_polynomial(int m);

class Cyclotomic {
 public:
  Cyclotomic(const CyclotomicField& field, const Rational& value);
  Cyclotomic(const CyclotomicField& field, std::vector<Rational> coords);
  static Cyclotomic zero(const CyclotomicField& field) { return {field, Rational(0)}; }
  static Cyclotomic one(const CyclotomicField& field) { return {field, Rational(1)}; }
  /// zeta_m^k.
  static Cyclotomic zeta(const CyclotomicField& field, int k = 1);

  const CyclotomicField& field() const { return *field_; }
  int order() const { return field_->order(); }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const;
  bool is_one() const;
  /// True when the element lies in Q (only the constant coordinate may be nonzero).
  bool is_rational() const;
  /// The rational value; throws when the element is not rational.
  const Rational& rational() const;
  /// When the element equals c * zeta^k, returns (c, k) with 0 <= k < m.
  std::optional<std::pair<Rational, int>> as_monomial() const;

  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& b);
  Cyclotomic& operator-=(const Cyclotomic& b);
  Cyclotomic& operator*=(const Cyclotomic& b);
  Cyclotomic& operator*=(const Rational& b);
  Cyclotomic& operator/=(const Cyclotomic& b) { return *this *= b.inverse(); }

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Rational& b) { return a *= b; }
  friend Cyclotomic operator*(const Rational& b, Cyclotomic a) { return a *= b; }
  friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

  /// Multiplicative inverse by the extended Euclidean algorithm against Phi_m.
  Cyclotomic inverse() const;
  Cyclotomic pow(long e) const;

  /// Complex value with zeta_m = exp(2 pi i / m). Reporting only.
  std::complex<double> to_complex() const;
  /// Real and imaginary parts as decimal strings, accurate to `digits` digits.
  std::pair<std::string, std::string> numeric_eval(int digits) const;

  /// Power-basis rendering, e.g. "2 - z" or "1/3*z^2", with `symbol` for zeta.
  std::string to_string(std::string_view symbol = "z") const;

 private:
  void check_same_field(const Cyclotomic& b, const char* op) const;

  const CyclotomicField* field_;
  std::vector<Rational> coords_;
};

inline bool is_zero(const Cyclotomic& a) { return a.is_zero(); }
inline Cyclotomic invert(const Cyclotomic& a) { return a.inverse(); }
inline Rational invert(const Rational& q) {
  if (sgn(q) == 0) throw ArithmeticError("division by zero in Q");
  return Rational(1) / q;
}

}  // namespace rspin

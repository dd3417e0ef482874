#pragma once

// Truncated Laurent series at infinity in one variable x, with MultiPoly
// coefficients. A series knows its coefficients for every exponent >= floor;
// exponents below the floor are unknown (not zero). Exact series carry the
// sentinel floor kExact.

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rspin/multipoly.hpp"

namespace rspin {

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LaurentSeries {
 public:
  static constexpr int kExact = std::numeric_limits<int>::min();

  LaurentSeries(std::string var, RegistryPtr coeffs, const CyclotomicField& field, int floor = kExact);
  /// Exact series of a polynomial in `var`; coefficients stay on p's registry.
  static LaurentSeries from_polynomial(const MultiPoly& p, std::string_view var);

  const std::string& var() const { return var_; }
  const RegistryPtr& coeff_registry() const { return coeffs_; }
  const CyclotomicField& field() const { return *field_; }
  int floor() const { return floor_; }
  bool is_exact() const { return floor_ == kExact; }
  const std::map<int, MultiPoly>& terms() const { return terms_; }

  /// Throws TruncationError when e lies below the floor.
  MultiPoly coefficient(int e) const;
  /// Replaces the coefficient of x^e; terms below the floor are rejected.
  void set(int e, const MultiPoly& c);
  /// Largest exponent with a nonzero coefficient, if any is tracked.
  std::optional<int> leading_exponent() const;
  /// Drops everything below `floor` and lowers precision to it.
  LaurentSeries truncated(int floor) const;

  LaurentSeries operator-() const;
  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) { return multiply(a, b, kExact); }
  LaurentSeries operator*(const Cyclotomic& c) const;
  LaurentSeries operator*(const Rational& c) const;
  /// Product with output restricted to exponents >= target_floor.
  static LaurentSeries multiply(const LaurentSeries& a, const LaurentSeries& b, int target_floor);

  /// f^q for rational q by the binomial series on f = c x^d (1 + h). The leading
  /// coefficient c must be a constant; for non-integer q it must equal 1 and q*d
  /// must be an integer. Result floor: max(target_floor, q*d + floor - d).
  LaurentSeries pow_rational(const Rational& q, int target_floor = kExact) const;
  LaurentSeries pow(int n, int target_floor = kExact) const { return pow_rational(Rational(n), target_floor); }
  LaurentSeries invert(int target_floor = kExact) const { return pow_rational(Rational(-1), target_floor); }

  /// This series evaluated at x = inner, where inner (in any variable) leads
  /// with exponent 1 and coefficient 1. Result floor:
  /// max(target_floor, floor, lead + inner.floor - 1).
  LaurentSeries compose(const LaurentSeries& inner, int target_floor = kExact) const;
  LaurentSeries derivative() const;
  /// Res_{x=inf} f dx := -[x^{-1}] f. Needs the x^{-1} coefficient to be tracked.
  MultiPoly residue_at_infinity() const;
  /// For k = x + (terms of exponent <= -1), the series x(k) in `new_var`
  /// with k(x(k)) = k down to the result floor max(target_floor, floor).
  LaurentSeries revert(std::string new_var, int target_floor = kExact) const;

  /// Equality of all coefficients at exponents >= floor (both sides must track them).
  bool agrees_from(const LaurentSeries& other, int floor) const;
  std::string to_string() const;

 private:
  void check_compatible(const LaurentSeries& b, const char* op) const;
  MultiPoly zero_coeff() const { return MultiPoly(coeffs_, *field_); }

  std::string var_;
  RegistryPtr coeffs_;
  const CyclotomicField* field_;
  int floor_;
  std::map<int, MultiPoly> terms_;
};

/// W^{1/r} for W monic of degree r in `var`: x + O(x^{-1}), tracked down to floor.
LaurentSeries monic_root(const MultiPoly& w, std::string_view var, int r, int floor);
/// W^{alpha/r}, same conventions as monic_root.
LaurentSeries fractional_power(const MultiPoly& w, std::string_view var, int alpha, int r, int floor);

}  // namespace rspin

#pragma once

// Sparse multivariate polynomials over Q(zeta_m) with a weighted variable
// registry, plus the two structural algorithms built on them: inversion of
// graded polynomial maps and normal forms modulo staircase ideals.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rspin/scalar.hpp"

namespace rspin {

using Exponents = std::vector<int>;

class PolynomialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered variable names with one rational grading weight each.
class VarRegistry {
 public:
  VarRegistry(std::vector<std::string> names, std::vector<Rational> weights);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const Rational& weight(std::size_t i) const { return weights_[i]; }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws PolynomialError for unknown names.
  std::size_t index_of(std::string_view name) const;

  friend bool operator==(const VarRegistry& a, const VarRegistry& b) {
    return a.names_ == b.names_ && a.weights_ == b.weights_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Rational> weights_;
};

using RegistryPtr = std::shared_ptr<const VarRegistry>;

RegistryPtr make_registry(std::vector<std::string> names, std::vector<Rational> weights);
bool same_registry(const RegistryPtr& a, const RegistryPtr& b);

class MultiPoly {
 public:
  using TermMap = std::map<Exponents, Cyclotomic>;

  MultiPoly(RegistryPtr registry, const CyclotomicField& field);
  static MultiPoly constant(RegistryPtr registry, const Cyclotomic& value);
  static MultiPoly constant(RegistryPtr registry, const CyclotomicField& field, const Rational& value);
  static MultiPoly variable(RegistryPtr registry, const CyclotomicField& field, std::string_view name);
  static MultiPoly monomial(RegistryPtr registry, const Cyclotomic& coeff, Exponents exps);

  const RegistryPtr& registry() const { return registry_; }
  const VarRegistry& vars() const { return *registry_; }
  const CyclotomicField& field() const { return *field_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// Set when the polynomial has no variable dependence (zero included).
  std::optional<Cyclotomic> constant_value() const;
  Cyclotomic coefficient(const Exponents& exps) const;
  /// Adds c * x^exps in place, dropping the term if it cancels.
  void add_term(const Exponents& exps, const Cyclotomic& c);

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& q);
  MultiPoly& operator-=(const MultiPoly& q);
  MultiPoly& operator*=(const Cyclotomic& c);
  MultiPoly& operator*=(const Rational& c);
  friend MultiPoly operator+(MultiPoly p, const MultiPoly& q) { return p += q; }
  friend MultiPoly operator-(MultiPoly p, const MultiPoly& q) { return p -= q; }
  friend MultiPoly operator*(const MultiPoly& p, const MultiPoly& q);
  friend MultiPoly operator*(MultiPoly p, const Cyclotomic& c) { return p *= c; }
  friend MultiPoly operator*(const Cyclotomic& c, MultiPoly p) { return p *= c; }
  friend MultiPoly operator*(MultiPoly p, const Rational& c) { return p *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly p) { return p *= c; }
  MultiPoly pow(unsigned e) const;

  /// Structural equality; polynomials on different registries are an error.
  friend bool operator==(const MultiPoly& p, const MultiPoly& q);
  friend bool operator!=(const MultiPoly& p, const MultiPoly& q) { return !(p == q); }

  MultiPoly derivative(std::string_view var) const;
  MultiPoly derivative(std::size_t var) const;
  /// Simultaneous substitution. Every binding lives on one target registry;
  /// unbound variables are carried over by name and must exist there.
  MultiPoly substitute(const std::map<std::string, MultiPoly>& bindings) const;
  /// Re-expresses the polynomial on another registry, matching variables by name.
  MultiPoly embed(const RegistryPtr& target) const;
  /// Coefficient of var^k with var eliminated from the support.
  MultiPoly coeff_in_var(std::string_view var, int k) const;
  /// Groups terms by their exponents in `vars`; each value has those variables removed.
  std::map<Exponents, MultiPoly> split_by(const std::vector<std::size_t>& vars) const;

  int degree_in(std::size_t var) const;
  int degree_in(std::string_view var) const { return degree_in(vars().index_of(var)); }
  /// Largest ordinary total degree (-1 for zero).
  int total_degree() const;
  /// Terms of ordinary total degree exactly d.
  MultiPoly homogeneous_part(int d) const;
  /// Terms of ordinary total degree at most d.
  MultiPoly truncate_degree(int d) const;
  Rational weighted_degree(const Exponents& exps) const;
  bool depends_on(std::size_t var) const;
  /// True when every coefficient lies in Q.
  bool has_rational_coefficients() const;
  /// The same polynomial over another field; coefficients must be rational
  /// unless the field is unchanged.
  MultiPoly over(const CyclotomicField& field) const;

  /// Human-readable rendering, terms in descending exponent order.
  std::string to_string(std::string_view zeta_symbol = "z") const;

 private:
  void check_compatible(const MultiPoly& q, const char* op) const;

  RegistryPtr registry_;
  const CyclotomicField* field_;
  TermMap terms_;
};

std::string to_string(const MultiPoly& p);

struct EulerCheck {
  bool homogeneous;
  /// sum_v weight(v) v dp/dv - total * p; zero exactly when homogeneous.
  MultiPoly residual;
};

EulerCheck euler_check(const MultiPoly& p, const Rational& total_degree);

/// Inverts a weighted-homogeneous polynomial map with invertible linear part.
/// maps[i] is a polynomial in the registry variables `source_vars`; the result
/// g has one entry per source variable, expressed on `target` (whose i-th
/// variable stands for maps[i]), with maps(g) = identity exactly.
std::vector<MultiPoly> graded_map_inverse(const std::vector<MultiPoly>& maps,
                                          const std::vector<std::string>& source_vars,
                                          const RegistryPtr& target);

/// Inverse of a square polynomial matrix whose constant part C is invertible
/// and whose remainder N makes C^{-1} N nilpotent (true for Jacobians of
/// graded coordinate changes). The result is verified exactly.
std::vector<std::vector<MultiPoly>> polynomial_matrix_inverse(const std::vector<std::vector<MultiPoly>>& m);

struct StaircaseReduction {
  MultiPoly normal_form;
  /// p = sum_i cofactors[i] * generators[i] + normal_form.
  std::vector<MultiPoly> cofactors;
};

/// Normal form modulo an ideal whose generators each lead with c_i * x_i^{k_i}
/// for distinct reduction variables x_i and a constant c_i != 0, with every
/// other term of strictly lower degree in the reduction variables. Remaining
/// registry variables act as coefficients.
StaircaseReduction reduce_mod_staircase(const MultiPoly& p, const std::vector<MultiPoly>& generators,
                                        const std::vector<std::string>& reduction_vars);

}  // namespace rspin

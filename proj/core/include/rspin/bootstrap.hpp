#pragma once

// Degree-by-degree WDVV bootstrap of a Frobenius potential with a constant
// metric, and a small propagation solver for polynomial systems whose
// solutions are expected to be rational points.

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rspin/linalg.hpp"
#include "rspin/multipoly.hpp"

namespace rspin {

class BootstrapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BootstrapProblem {
  /// Registry holding the potential variables (weights = grading).
  RegistryPtr registry;
  /// Indices of the potential variables inside the registry.
  std::vector<std::size_t> vars;
  Rational total_degree;
  /// Constant metric eta_ab = d^3F / dt_unit dt_a dt_b, over `vars`.
  Matrix<Rational> eta;
  /// Position of the unit variable within `vars`.
  std::size_t unit = 0;
  /// Extra selection rule on full exponent vectors; empty = none.
  std::function<bool(const Exponents&)> selection;
  /// Prescribed monomial coefficients (full exponent vectors).
  std::map<Exponents, Rational> seeds;
};

struct LevelReport {
  int points = 0;
  std::size_t monomials = 0;
  std::size_t seeded = 0;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::size_t rank = 0;
  bool consistent = true;
};

struct BootstrapResult {
  /// Potential over Q on the problem registry (free unknowns set to 0).
  MultiPoly potential;
  std::vector<LevelReport> levels;
  bool unique() const;
  /// "n=5: rank 3 of 4 unknowns" style summary of the first defect, or empty.
  std::string defect() const;
};

/// Admissible monomials (full exponent vectors) of the given ordinary degree.
std::vector<Exponents> admissible_monomials(const BootstrapProblem& problem, int points);
/// Solves the bootstrap; never throws on rank defects (they are reported).
BootstrapResult wdvv_solve(const BootstrapProblem& problem);

/// sum_{mu nu} eta^{mu nu} (F_{a b mu} F_{nu c d} - F_{a c mu} F_{nu b d}).
MultiPoly wdvv_expression(const MultiPoly& f, const std::vector<std::size_t>& vars, const Matrix<Rational>& eta_inverse,
                          std::size_t a, std::size_t b, std::size_t c, std::size_t d);

/// Coefficient of the monomial prod t_{key_i} times prod (multiplicity)!.
Rational correlator_extract(const MultiPoly& f, const std::vector<std::size_t>& key);

/// Result of a propagation solve over Q.
struct PolySystemSolution {
  std::map<std::size_t, Rational> values;
  /// Unknowns left free when propagation stalls.
  std::vector<std::size_t> undetermined;
  bool complete() const { return undetermined.empty(); }
};

struct PolySystemReport {
  std::vector<PolySystemSolution> solutions;
  std::size_t branches = 0;
  /// Set when a univariate equation had roots outside Q (solutions may be missing).
  bool irrational_roots = false;
};

/// Solves polynomial equations in the registry variables `unknowns` (all other
/// variables must be absent) by repeatedly solving the linear subsystem and
/// branching on rational roots of univariate equations.
PolySystemReport solve_polynomial_system(const std::vector<MultiPoly>& equations, const std::vector<std::size_t>& unknowns,
                                         std::size_t max_branches = 256);

/// Rational roots of sum c_i u^i, without multiplicity, ascending.
std::vector<Rational> rational_roots(const std::vector<Rational>& coeffs, bool* has_other_roots = nullptr);

}  // namespace rspin

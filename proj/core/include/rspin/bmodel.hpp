#pragma once

// Saito Frobenius data of the A_{r-1} singularity W = x^r: miniversal
// deformation, residue metric, flat coordinates by series reversion, the
// mirror coordinate change and the Jacobian-algebra multiplication.

#include <string>
#include <vector>

#include "rspin/laurent.hpp"
#include "rspin/multipoly.hpp"

namespace rspin {

using PolyMatrix = std::vector<std::vector<MultiPoly>>;

/// Metric, structure constants and coordinate names of one Frobenius structure.
/// structure[k][i][j] = c^k_{ij}.
struct FrobeniusData {
  std::vector<std::string> coords;
  PolyMatrix metric;
  std::vector<PolyMatrix> structure;
  std::size_t unit = 0;
};

/// All registries and cached constructions for one r. Coefficients live in
/// Q(zeta_{2r}) with theta = zeta_{2r}.
class ASession {
 public:
  explicit ASession(int r, int floor = 0);

  int r() const { return r_; }
  /// Series floor used for root extraction and reversion; default -(r+2).
  int floor() const { return floor_; }
  const CyclotomicField& field() const { return *field_; }
  const Cyclotomic& theta() const { return theta_; }

  /// x, s_0..s_{r-2} with deg x = 1, deg s_i = r - i.
  const RegistryPtr& deform_registry() const { return deform_; }
  /// t_0..t_{r-1}, x with deg t_a = r - a, deg x = 1.
  const RegistryPtr& t_registry() const { return t_; }
  /// T1..T{r-1} with deg T^a = r - a + 1.
  const RegistryPtr& flat_registry() const { return flat_; }

  static std::string s_name(int i) { return "s_" + std::to_string(i); }
  static std::string t_name(int a) { return "t_" + std::to_string(a); }
  static std::string flat_name(int a) { return "T" + std::to_string(a); }

  MultiPoly s(int i) const { return MultiPoly::variable(deform_, *field_, s_name(i)); }
  MultiPoly x() const { return MultiPoly::variable(deform_, *field_, "x"); }
  MultiPoly t(int a) const { return MultiPoly::variable(t_, *field_, t_name(a)); }
  MultiPoly t_x() const { return MultiPoly::variable(t_, *field_, "x"); }
  MultiPoly t_const(const Cyclotomic& c) const { return MultiPoly::constant(t_, c); }
  Cyclotomic scalar(const Rational& q) const { return Cyclotomic(*field_, q); }

  /// W_s = x^r + sum_i s_i x^i.
  const MultiPoly& deformation() const { return w_; }
  /// g_ij = theta^2 r Res_{x=inf} x^{i+j} / W_s'.
  const PolyMatrix& saito_metric() const;
  /// T^1..T^{r-1} read from x(k) = k + (1/r) sum_a T^a k^{-(r-a)} + ..., k = W^{1/r}.
  const std::vector<MultiPoly>& flat_coordinates() const;
  /// v_a = -Res_{x=inf} W^{a/r}, a = 1..r-1.
  const std::vector<MultiPoly>& v_coordinates() const;
  /// s_0(t)..s_{r-2}(t) on the t registry, from T^{a+1} = theta^{a-r} t_a.
  const std::vector<MultiPoly>& s_of_t() const;
  /// s_i(T) on the flat registry.
  const std::vector<MultiPoly>& s_of_flat() const;
  /// J[i][a] = ds_i/dt_a.
  const PolyMatrix& jacobian_s_t() const;
  /// c^k_{ij}(s): x^{i+j} mod W_s' in the basis 1, x, ..., x^{r-2}.
  const std::vector<PolyMatrix>& structure_constants_s() const;
  FrobeniusData frobenius_s() const;
  /// G_ab(t) = sum_ij g_ij(s(t)) ds_i/dt_a ds_j/dt_b.
  PolyMatrix transformed_metric() const;
  /// c_abc(t): the Jacobian-algebra product in t coordinates, lowered with g.
  const std::vector<PolyMatrix>& lowered_structure_t() const;
  /// F_B with third derivatives c_abc(t) and no terms of degree <= 2.
  const MultiPoly& bmodel_potential() const;

  /// Substitutes s_i -> s_i(t) into a polynomial on the deformation registry,
  /// returning a polynomial on the t registry (x is kept).
  MultiPoly at_s_of_t(const MultiPoly& p) const;

 private:
  int r_;
  int floor_;
  const CyclotomicField* field_;
  Cyclotomic theta_;
  RegistryPtr deform_, t_, flat_;
  MultiPoly w_;

  mutable std::optional<PolyMatrix> metric_;
  mutable std::optional<std::vector<MultiPoly>> flat_coords_, v_coords_, s_of_t_, s_of_flat_;
  mutable std::optional<PolyMatrix> jac_;
  mutable std::optional<std::vector<PolyMatrix>> structure_s_, lowered_t_;
  mutable std::optional<MultiPoly> potential_;
};

/// Integrates a totally symmetric tensor of third derivatives over the given
/// variables: returns F with no terms of degree <= 2 and d^3F = c, or throws
/// PolynomialError when c is not a third-derivative tensor.
MultiPoly integrate_third_derivatives(const std::vector<PolyMatrix>& c, const std::vector<std::size_t>& vars);
/// Same for a symmetric Hessian; no terms of degree <= 1.
MultiPoly integrate_second_derivatives(const PolyMatrix& h, const std::vector<std::size_t>& vars);

}  // namespace rspin

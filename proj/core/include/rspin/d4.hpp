#pragma once

// The D4 case through W_{3,3} = x1^3 + x2^3: FJRW potential by bootstrap,
// residue metric of the miniversal deformation by sampling and exact
// interpolation, the flat coordinate change and the extended identity.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rspin/bmodel.hpp"
#include "rspin/bootstrap.hpp"
#include "rspin/report.hpp"

namespace rspin {

class InterpolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when M_J is singular at a sample point; callers pick another point.
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Registries and the deformation W_s = x1^3 + x2^3 + s11 x1 x2 + s01 x2 + s10 x1 + s00.
/// Coordinates are ordered (0,0), (1,0), (0,1), (1,1); coefficients in Q.
class D4Session {
 public:
  D4Session();

  const CyclotomicField& field() const { return *field_; }
  /// x1, x2, s00, s10, s01, s11 with deg x = 1, deg s_ij = 3 - i - j.
  const RegistryPtr& s_registry() const { return s_reg_; }
  /// t00, t10, t01, t11, x1, x2 with deg t_ij = 1 - (i + j)/3, deg x = 1/3.
  const RegistryPtr& t_registry() const { return t_reg_; }

  static const std::vector<std::string>& s_names();
  static const std::vector<std::string>& t_names();
  /// (i, j) of coordinate k.
  static std::pair<int, int> index_pair(int k);

  MultiPoly s(int k) const { return MultiPoly::variable(s_reg_, *field_, s_names()[k]); }
  MultiPoly t(int k) const { return MultiPoly::variable(t_reg_, *field_, t_names()[k]); }
  MultiPoly x(int i) const { return MultiPoly::variable(s_reg_, *field_, i == 1 ? "x1" : "x2"); }
  MultiPoly tx(int i) const { return MultiPoly::variable(t_reg_, *field_, i == 1 ? "x1" : "x2"); }

  const MultiPoly& deformation() const { return w_; }
  /// dW/dx1, dW/dx2.
  std::vector<MultiPoly> jacobian_ideal() const;
  /// det Hess(W_s).
  MultiPoly hessian_determinant() const;
  /// Basis monomial x1^i x2^j of coordinate k on the s registry.
  MultiPoly basis(int k) const;
  /// c^k_{ij}(s): e_i e_j mod the Jacobian ideal in the basis 1, x1, x2, x1 x2.
  std::vector<PolyMatrix> structure_constants_s() const;

  /// t(s) as stated: t00 = s00 + s11^3/54, t10 = -s10, t01 = -s01, t11 = s11 (on the s registry).
  std::vector<MultiPoly> t_of_s() const;
  /// Its inverse s(t) on the t registry, by graded inversion.
  std::vector<MultiPoly> s_of_t() const;
  /// W_{s(t)}(x) on the t registry.
  MultiPoly deformation_at_t() const;

 private:
  const CyclotomicField* field_;
  RegistryPtr s_reg_, t_reg_;
  MultiPoly w_;
};

BootstrapProblem w33_bootstrap_problem(const D4Session& d, bool mod_rules = true);
/// F^{FJRW}_{0,W_{3,3}} on the t registry; throws BootstrapError on a rank defect.
MultiPoly w33_bootstrap(const D4Session& d, bool mod_rules = true);
/// The six-term closed form, for comparison.
MultiPoly w33_closed_form(const D4Session& d);

/// Global residue sum_p phi(p)/J(p) at a rational point s = (s00, s10, s01, s11),
/// via Tr(M_phi M_J^{-1}) on the quotient algebra. phi lives on the s registry.
Rational bivariate_residue(const D4Session& d, const MultiPoly& phi, const std::vector<Rational>& s_point);

/// Deterministic sequence of small rational sample points.
class SamplePoints {
 public:
  explicit SamplePoints(std::uint64_t seed);
  std::vector<Rational> next();

 private:
  std::uint64_t state_;
};

struct InterpolatedMetric {
  PolyMatrix metric;  // on the s registry
  int degree_bound = 0;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::size_t holdouts = 0;
};

/// g_{ij;kl}(s) = 9 Res(x1^{i+k} x2^{j+l}) by sampling and exact interpolation
/// with polynomials of total degree <= degree_bound; two holdout points.
InterpolatedMetric saito_metric_w33(const D4Session& d, std::uint64_t seed = 0, int degree_bound = 4);

VerificationReport verify_w33_bootstrap(const D4Session& d);
VerificationReport verify_w33_metric(const D4Session& d, const InterpolatedMetric& g);
/// Flatness of J^T g J and c_{abc}(t) = d^3 F / dt_a dt_b dt_c.
VerificationReport verify_d4_flat_change(const D4Session& d, const InterpolatedMetric& g, const MultiPoly& f);
/// W_{s(t)}(x1/3, x2/3) against the closed form of P, the alpha values and s_ij(t).
VerificationReport verify_d4_extended(const D4Session& d);
/// F_{D4^T} under the coordinate change equals F_{W33} / (36 3^{1/3} a^{2/3}), as a
/// polynomial identity in formal u = a^{1/3} and w = 3^{1/6}.
VerificationReport compare_d4_transpose(const D4Session& d, const MultiPoly& f_w33);

}  // namespace rspin

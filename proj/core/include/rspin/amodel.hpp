#pragma once

// r-spin side: the WDVV bootstrap of F^{r-spin}, the extended potential
// F^ext (reconstructed from the B-model or bootstrapped from the WDVV-type
// system) and the identities relating both sides.

#include <optional>
#include <string>
#include <vector>

#include "rspin/bmodel.hpp"
#include "rspin/bootstrap.hpp"
#include "rspin/report.hpp"

namespace rspin {

/// Homogeneity, metric and seeds of F^{r-spin} on the session's t registry.
BootstrapProblem rspin_bootstrap_problem(const ASession& s);

struct RspinPotential {
  /// Over Q(zeta_{2r}) on the t registry.
  MultiPoly potential;
  BootstrapResult details;
};

/// F^{r-spin}; throws BootstrapError naming the first level with a rank defect.
RspinPotential wdvv_bootstrap(const ASession& s);

/// <tau_{-1} tau_gamma tau_{r-1}^{gamma+1}> = gamma!/(-r)^gamma.
Rational one_point_value(int r, int gamma);

/// G(t) = W_{s(t)}(t_{r-1} / (-r theta)), the candidate dF^ext/dt_{r-1}.
MultiPoly extended_from_bmodel(const ASession& s);

/// F^ext from F^{r-spin} and G: the WDVV-type equations with beta = r-1 are
/// solved for F^ext_{alpha gamma} by exact division by dG/dt_{r-1}, then the
/// Hessian is integrated. Throws PolynomialError if a division is inexact.
MultiPoly reconstruct_full_fext(const ASession& s, const MultiPoly& frs, const MultiPoly& g);

struct ExtendedBootstrapOptions {
  int max_r = 4;
  std::size_t max_branches = 256;
};

struct ExtendedStratum {
  int points = 0;
  std::size_t monomials = 0;
  std::size_t seeded = 0;
  std::size_t unknowns = 0;
  /// Unknowns fixed to the same value in every complete nondegenerate solution.
  std::size_t determined = 0;
};

struct ExtendedBootstrapResult {
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::size_t raw_solutions = 0;
  std::size_t partial_solutions = 0;
  bool irrational_roots = false;
  std::vector<ExtendedStratum> strata;
  /// Complete solutions with invertible linear part of s~(t).
  std::vector<MultiPoly> nondegenerate;
  /// Set when the nondegenerate solution is unique and nothing was left open.
  std::optional<MultiPoly> potential;
  bool unique() const { return potential.has_value(); }
};

/// Solves homogeneity + WDVV-type equations + one-point seeds (gamma >= 1)
/// for all coefficients of F^ext. Throws std::invalid_argument above max_r.
ExtendedBootstrapResult extended_bootstrap(const ASession& s, const MultiPoly& frs,
                                           const ExtendedBootstrapOptions& options = {});

/// s~_i(t) = (-r theta)^i Coef_{t_{r-1}^i} dF^ext/dt_{r-1}, i = 0..r-2.
std::vector<MultiPoly> s_tilde(const ASession& s, const MultiPoly& fext);

/// s_i(t) = s~_i(t) for each i, plus W_{s(t)}(x) = dF^ext/dt_{r-1} at t_{r-1} = -r theta x.
VerificationReport verify_extended_identity(const ASession& s, const MultiPoly& fext, const std::string& route);
/// WDVV residuals, unit axiom, <tau_{r-2}^2 tau_1^2> = 1/r, Euler grading and F_B = F^{r-spin}.
VerificationReport verify_rspin_bootstrap(const ASession& s, const MultiPoly& frs);
VerificationReport verify_wdvv_type(const ASession& s, const MultiPoly& frs, const MultiPoly& fext);
/// [t_{r-1}^{-1}] F^ext_{a,r-1} F^ext_{b,r-1} / F^ext_{r-1,r-1} = -r delta_{a+b,r-2}.
VerificationReport verify_residue_metric(const ASession& s, const MultiPoly& fext);
VerificationReport verify_multiplication(const ASession& s, const MultiPoly& frs, const MultiPoly& fext);
VerificationReport verify_one_point(const ASession& s, const MultiPoly& fext);
/// v_a = -(a/r) T^{r-a} for a = 1..r-1, plus the grading of T^a and v_a.
VerificationReport verify_v_coordinates(const ASession& s);
/// G_ab(t) = delta_{a+b,r-2} for the transformed Saito metric.
VerificationReport verify_flat_metric(const ASession& s);
/// Runs the extended bootstrap and compares a unique solution with `fext`.
/// Uniqueness is recorded in the metadata; only disagreement fails.
VerificationReport verify_extended_bootstrap(const ASession& s, const MultiPoly& frs, const MultiPoly& fext,
                                             const ExtendedBootstrapOptions& options = {});

/// F^{r-spin} and F^ext for one r. The bootstrap route is used when it was
/// requested and produced a unique solution; otherwise the reconstruction.
struct ExtendedPipeline {
  MultiPoly frs;
  MultiPoly fext;
  std::string route;
  std::optional<ExtendedBootstrapResult> bootstrap;
  /// Set when both routes ran: whether they agree exactly.
  std::optional<bool> routes_agree;
};

ExtendedPipeline extended_pipeline(const ASession& s, bool run_bootstrap, const ExtendedBootstrapOptions& options = {});

}  // namespace rspin

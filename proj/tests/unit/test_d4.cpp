#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "rspin/d4.hpp"

using namespace rspin;

namespace {

using cd = std::complex<double>;

std::string failures(const VerificationReport& rep) {
  std::string out;
  for (const auto& c : rep.cases) {
    if (c.pass) continue;
    out += c.note;
    if (c.residual) out += " residual " + c.residual->to_string();
    out += "; ";
  }
  return out;
}

// Roots of a monic-normalizable polynomial (constant term first) by Durand-Kerner.
std::vector<cd> roots(std::vector<cd> c) {
  const std::size_t n = c.size() - 1;
  for (auto& v : c) v /= c.back();
  std::vector<cd> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(cd(0.4, 0.9), static_cast<double>(i));
  auto eval = [&](cd x) {
    cd acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  };
  for (int it = 0; it < 1000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      cd den = 1;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) den *= z[i] - z[j];
      }
      z[i] -= eval(z[i]) / den;
    }
  }
  return z;
}

// Test-side residue oracle: sum over critical points of x1^a x2^b / det Hess.
// With s11 != 0, x2 = -(3 x1^2 + s10)/s11 and 3 x2^2 + s11 x1 + s01 = 0 is a quartic in x1.
cd residue_oracle(double s10, double s01, double s11, int a, int b) {
  const double k = 1.0 / s11;
  // 3 k^2 (3 x1^2 + s10)^2 + s11 x1 + s01.
  std::vector<cd> quartic{3 * k * k * s10 * s10 + s01, s11, 18 * k * k * s10, 0, 27 * k * k};
  cd acc = 0;
  for (auto x1 : roots(quartic)) {
    const cd x2 = -(3.0 * x1 * x1 + s10) * k;
    const cd hess = 36.0 * x1 * x2 - s11 * s11;
    acc += std::pow(x1, a) * std::pow(x2, b) / hess;
  }
  return acc;
}

}  // namespace

TEST_CASE("W33 bootstrap") {
  D4Session d;
  const auto f = w33_bootstrap(d);
  CHECK(f == w33_closed_form(d));
  Exponents top(d.t_registry()->size(), 0);
  top[3] = 7;
  CHECK(f.coefficient(top).rational() == frac(1, 68040));
  CHECK(correlator_extract(f, {3, 1, 1, 1}) == frac(1, 3));
  CHECK(correlator_extract(f, {0, 0, 3}) == 1);
  CHECK(correlator_extract(f, {0, 1, 2}) == 1);
  const auto rep = verify_w33_bootstrap(d);
  CHECK_MESSAGE(rep.passed(), failures(rep));
  CHECK(rep.metadata.at("degree-rule-only") == "unique, same potential");
}

TEST_CASE("W33 bootstrap levels") {
  D4Session d;
  const auto p = w33_bootstrap_problem(d);
  CHECK(admissible_monomials(p, 3).size() == 2);
  CHECK(admissible_monomials(p, 4).size() == 2);
  CHECK(admissible_monomials(p, 6).empty());
  const auto res = wdvv_solve(p);
  CHECK(res.unique());
  auto missing = p;
  missing.seeds.erase(missing.seeds.begin());
  const auto defect = wdvv_solve(missing);
  CHECK_FALSE(defect.unique());
  CHECK(defect.defect().rfind("n=4", 0) == 0);
}

TEST_CASE("bivariate residues") {
  D4Session d;
  const std::vector<Rational> s{frac(1, 2), Rational(2), Rational(-3), Rational(1)};
  CHECK(bivariate_residue(d, d.hessian_determinant(), s) == 4);
  CHECK(bivariate_residue(d, MultiPoly::constant(d.s_registry(), d.field(), Rational(1)), s) == 0);
  CHECK(bivariate_residue(d, d.x(1) * d.x(2), {Rational(0), Rational(1), Rational(1), Rational(0)}) == frac(1, 9));
  CHECK_THROWS_AS(bivariate_residue(d, d.x(1), {Rational(0), Rational(0), Rational(0), Rational(0)}), DegenerateSampleError);

  SamplePoints pts(3);
  int checked = 0;
  while (checked < 6) {
    const auto p = pts.next();
    if (is_zero(p[3])) continue;
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; b <= 2; ++b) {
        CAPTURE(a);
        CAPTURE(b);
        Rational exact;
        try {
          exact = bivariate_residue(d, d.x(1).pow(unsigned(a)) * d.x(2).pow(unsigned(b)), p);
        } catch (const DegenerateSampleError&) {
          continue;
        }
        const cd oracle = residue_oracle(p[1].get_d(), p[2].get_d(), p[3].get_d(), a, b);
        CHECK(std::abs(exact.get_d() - oracle.real()) < 1e-6 * std::max(1.0, std::abs(oracle)));
        CHECK(std::abs(oracle.imag()) < 1e-6);
      }
    }
    ++checked;
  }
}

TEST_CASE("sample points are deterministic") {
  SamplePoints a(42), b(42), c(43);
  const auto pa = a.next();
  CHECK(pa == b.next());
  CHECK(pa != c.next());
  CHECK(pa.size() == 4);
}

TEST_CASE("interpolated metric") {
  D4Session d;
  const auto g = saito_metric_w33(d);
  CHECK(g.metric[0][3] == MultiPoly::constant(d.s_registry(), d.field(), Rational(1)));
  CHECK(g.metric[1][2] == MultiPoly::constant(d.s_registry(), d.field(), Rational(1)));
  CHECK(g.metric[3][3] == d.s(3).pow(2) * frac(1, 9));
  CHECK(g.metric[0][0].is_zero());
  CHECK(g.holdouts == 2);
  const auto rep = verify_w33_metric(d, g);
  CHECK_MESSAGE(rep.passed(), failures(rep));
  // Same interpolant from another seed.
  CHECK(saito_metric_w33(d, 99, 2).metric == g.metric);
  CHECK_THROWS_AS(saito_metric_w33(d, 0, 1), InterpolationError);
  CHECK_THROWS_AS(saito_metric_w33(d, 0, 0), std::invalid_argument);
}

TEST_CASE("flat coordinates for D4") {
  D4Session d;
  const auto st = d.s_of_t();
  CHECK(st[0] == d.t(0) - d.t(3).pow(3) * frac(1, 54));
  CHECK(st[1] == -d.t(1));
  CHECK(st[3] == d.t(3));
  const auto g = saito_metric_w33(d, 0, 2);
  const auto rep = verify_d4_flat_change(d, g, w33_bootstrap(d));
  CHECK_MESSAGE(rep.passed(), failures(rep));
  const auto bad = verify_d4_flat_change(d, g, w33_bootstrap(d) + d.t(3).pow(7));
  CHECK_FALSE(bad.passed());
}

TEST_CASE("extended identity for D4") {
  D4Session d;
  const auto rep = verify_d4_extended(d);
  CHECK_MESSAGE(rep.passed(), failures(rep));
  CHECK(rep.cases.size() == 12);
  CHECK(euler_check(d.deformation(), Rational(3)).homogeneous);
}

TEST_CASE("comparison with the D4^T potential") {
  D4Session d;
  const auto rep = compare_d4_transpose(d, w33_bootstrap(d));
  CHECK_MESSAGE(rep.passed(), failures(rep));
  const auto bad = compare_d4_transpose(d, w33_bootstrap(d) + d.t(3).pow(7) * frac(1, 68040));
  CHECK_FALSE(bad.passed());
}

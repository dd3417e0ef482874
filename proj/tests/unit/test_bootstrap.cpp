#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "rspin/bootstrap.hpp"
#include "support.hpp"

using namespace rspin;
using rspin::testing::Ring;

namespace {

// A_3 Frobenius structure on variables a, b, c (the r = 4 spin theory).
BootstrapProblem a3_problem(const Ring& R, bool with_four_point_seed) {
  BootstrapProblem p;
  p.registry = R.reg;
  p.vars = {0, 1, 2};
  p.total_degree = 10;
  p.eta = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
  p.unit = 0;
  p.seeds[{2, 0, 1}] = frac(1, 2);
  p.seeds[{1, 2, 0}] = frac(1, 2);
  // <tau_2^2 tau_1^2> = 1/4, divided by 2! 2!.
  if (with_four_point_seed) p.seeds[{0, 2, 2}] = frac(1, 16);
  return p;
}

}  // namespace

TEST_CASE("admissible monomials") {
  Ring R({"a", "b", "c"}, {Rational(4), Rational(3), Rational(2)});
  auto p = a3_problem(R, true);
  CHECK(admissible_monomials(p, 3) == std::vector<Exponents>{{2, 0, 1}, {1, 2, 0}});
  // a c^3 is admissible but excluded from the unknowns by the unit axiom.
  CHECK(admissible_monomials(p, 4) == std::vector<Exponents>{{1, 0, 3}, {0, 2, 2}});
  CHECK(admissible_monomials(p, 5) == std::vector<Exponents>{{0, 0, 5}});
  p.selection = [](const Exponents& e) { return e[1] == 0; };
  CHECK(admissible_monomials(p, 3) == std::vector<Exponents>{{2, 0, 1}});
}

TEST_CASE("WDVV bootstrap of the A_3 potential") {
  Ring R({"a", "b", "c"}, {Rational(4), Rational(3), Rational(2)});
  const auto res = wdvv_solve(a3_problem(R, true));
  CHECK(res.unique());
  CHECK(res.defect().empty());
  const auto a = R.v("a"), b = R.v("b"), c = R.v("c");
  CHECK(res.potential == a.pow(2) * c * frac(1, 2) + a * b.pow(2) * frac(1, 2) + b.pow(2) * c.pow(2) * frac(1, 16) +
                             c.pow(5) * frac(1, 960));
  REQUIRE(res.levels.size() == 3);
  CHECK(res.levels[2].points == 5);
  CHECK(res.levels[2].unknowns == 1);
  CHECK(res.levels[2].rank == 1);
  Matrix<Rational> eta_inv = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t l = 0; l < 3; ++l) CHECK(wdvv_expression(res.potential, {0, 1, 2}, eta_inv, i, j, k, l).is_zero());
      }
    }
  }
}

TEST_CASE("missing seed is reported as a rank defect") {
  Ring R({"a", "b", "c"}, {Rational(4), Rational(3), Rational(2)});
  const auto res = wdvv_solve(a3_problem(R, false));
  CHECK_FALSE(res.unique());
  CHECK(res.defect() == "n=4: rank 0 of 1 unknowns");
}

TEST_CASE("inadmissible seed is rejected") {
  Ring R({"a", "b", "c"}, {Rational(4), Rational(3), Rational(2)});
  auto p = a3_problem(R, true);
  p.seeds[{3, 0, 0}] = 1;
  CHECK_THROWS_AS(wdvv_solve(p), BootstrapError);
}

TEST_CASE("correlator extraction") {
  Ring R({"a", "b"}, {Rational(2), Rational(1)});
  const auto f = R.v("a").pow(3) * frac(1, 6) + R.v("b").pow(4) * frac(1, 72);
  CHECK(correlator_extract(f, {0, 0, 0}) == 1);
  CHECK(correlator_extract(f, {1, 1, 1, 1}) == frac(1, 3));
  CHECK(correlator_extract(f, {0, 1}) == 0);
  CHECK_THROWS_AS(correlator_extract(f, {5}), PolynomialError);
}

TEST_CASE("rational roots") {
  // (u - 1)(2u + 3)(u^2 + 1) = 2u^4 + u^3 - u^2 + u - 3.
  bool other = false;
  CHECK(rational_roots({Rational(-3), Rational(1), Rational(-1), Rational(1), Rational(2)}, &other) ==
        std::vector<Rational>{frac(-3, 2), Rational(1)});
  CHECK(other);
  // u^2 (u - 2).
  CHECK(rational_roots({Rational(0), Rational(0), Rational(-2), Rational(1)}, &other) ==
        std::vector<Rational>{Rational(0), Rational(2)});
  CHECK_FALSE(other);
  // (3u - 1)^2.
  CHECK(rational_roots({Rational(1), Rational(-6), Rational(9)}, &other) == std::vector<Rational>{frac(1, 3)});
  CHECK_FALSE(other);
  CHECK_THROWS_AS(rational_roots({Rational(0)}), BootstrapError);
}

TEST_CASE("polynomial systems") {
  Ring R({"u", "v", "w"}, {Rational(0), Rational(0), Rational(0)});
  const auto u = R.v("u"), v = R.v("v"), w = R.v("w");
  auto rep = solve_polynomial_system({u * u - R.c(1), v - u * Rational(2)}, {0, 1});
  REQUIRE(rep.solutions.size() == 2);
  CHECK(rep.solutions[0].complete());
  std::vector<std::pair<Rational, Rational>> got;
  for (const auto& s : rep.solutions) got.emplace_back(s.values.at(0), s.values.at(1));
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<std::pair<Rational, Rational>>{{-1, -2}, {1, 2}});

  // Linear elimination feeding a univariate equation: u = v + 1, u v = 2.
  rep = solve_polynomial_system({u - v - R.c(1), u * v - R.c(2)}, {0, 1});
  CHECK(rep.solutions.size() == 2);

  // Inconsistent.
  rep = solve_polynomial_system({u - R.c(1), u - R.c(2)}, {0});
  CHECK(rep.solutions.empty());

  // A free unknown stays undetermined.
  rep = solve_polynomial_system({u - R.c(3)}, {0, 2});
  REQUIRE(rep.solutions.size() == 1);
  CHECK(rep.solutions[0].values.at(0) == 3);
  CHECK(rep.solutions[0].undetermined == std::vector<std::size_t>{2});

  // Irrational roots are flagged.
  rep = solve_polynomial_system({u * u - R.c(2), w}, {0, 2});
  CHECK(rep.irrational_roots);
  CHECK(rep.solutions.empty());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "rspin/multipoly.hpp"
#include "support.hpp"

using namespace rspin;
using rspin::testing::Ring;

namespace {

// All exponent vectors with weighted degree exactly `deg` (integral weights).
std::vector<Exponents> monomials_of_weight(const std::vector<int>& weights, int deg) {
  std::vector<Exponents> out;
  Exponents e(weights.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == weights.size()) {
      if (left == 0) out.push_back(e);
      return;
    }
    for (int k = 0; k * weights[i] <= left; ++k) {
      e[i] = k;
      rec(i + 1, left - k * weights[i]);
    }
    e[i] = 0;
  };
  rec(0, deg);
  return out;
}

MultiPoly random_poly(const Ring& R, std::mt19937_64& rng, int terms, int max_exp) {
  std::uniform_int_distribution<int> ex(0, max_exp), num(-9, 9), den(1, 5);
  MultiPoly p = R.zero();
  for (int i = 0; i < terms; ++i) {
    Exponents e(R.reg->size());
    for (auto& v : e) v = ex(rng);
    p.add_term(e, Cyclotomic(*R.field, frac(num(rng), den(rng))));
  }
  return p;
}

}  // namespace

TEST_CASE("ring arithmetic") {
  Ring R({"t_0", "t_1", "x", "s_0"}, 6);
  auto t0 = R.v("t_0"), t1 = R.v("t_1"), x = R.v("x"), s0 = R.v("s_0");
  CHECK(t0 * t0 == t0.pow(2));
  CHECK((x + s0) * (x - s0) == x * x - s0 * s0);
  const auto th = R.zeta();
  auto lhs = (t0 + th * t1).pow(2);
  auto rhs = t0 * t0 + (th * Rational(2)) * (t0 * t1) + (th * th) * (t1 * t1);
  CHECK(lhs == rhs);
  CHECK(lhs.size() == 3);
  CHECK((t0 - t0).is_zero());
  Ring other({"t_0"});
  CHECK_THROWS_AS(t0 + other.v("t_0"), PolynomialError);
}

TEST_CASE("partial derivatives") {
  Ring R({"t_0", "t_1"});
  auto t0 = R.v("t_0"), t1 = R.v("t_1");
  CHECK((t0.pow(3) * frac(1, 6)).derivative("t_0") == t0.pow(2) * frac(1, 2));
  auto fext = t0 * t1 - t1.pow(3) * frac(1, 12);
  CHECK(fext.derivative("t_1") == t0 - t1.pow(2) * frac(1, 4));
  CHECK(R.c(7).derivative("t_0").is_zero());
  CHECK_THROWS_AS(t0.derivative("t_9"), PolynomialError);
}

TEST_CASE("substitution") {
  Ring R({"t_0", "t_1", "x"}, 4);
  auto t0 = R.v("t_0"), t1 = R.v("t_1"), x = R.v("x");
  const auto theta2 = R.zeta();
  const auto image = x * (theta2 * Rational(-2));
  CHECK(t1.pow(2).substitute({{"t_1", image}}) == x.pow(2) * Rational(-4));
  auto p = t0 - t1.pow(2) * frac(1, 4);
  CHECK(p.substitute({{"t_0", t0}, {"t_1", t1}}) == p);
  CHECK(p.substitute({{"t_1", image}, {"t_0", t0}}) == t0 + x.pow(2));
  CHECK_THROWS_AS(p.substitute({{"y", t0}}), PolynomialError);
}

TEST_CASE("coefficient extraction") {
  Ring R({"t_0", "t_1", "t_2"});
  auto t0 = R.v("t_0"), t1 = R.v("t_1"), t2 = R.v("t_2");
  auto p = t0 - t1.pow(2) * frac(1, 4);
  CHECK(p.coeff_in_var("t_1", 2) == R.c(-1, 4));
  CHECK(p.coeff_in_var("t_1", 5).is_zero());
  CHECK((t0 * t2 + t1 * t2.pow(2)).coeff_in_var("t_2", 1) == t0);
}

TEST_CASE("Euler grading check") {
  Ring r2({"t_0"}, {Rational(2)});
  CHECK(euler_check(r2.v("t_0").pow(3) * frac(1, 6), 6).homogeneous);
  Ring ext({"t_0", "t_1"}, {Rational(2), Rational(1)});
  auto fext = ext.v("t_0") * ext.v("t_1") - ext.v("t_1").pow(3) * frac(1, 12);
  CHECK(euler_check(fext, 3).homogeneous);
  auto mixed = ext.v("t_0") + ext.v("t_0").pow(2);
  auto res = euler_check(mixed, 2);
  CHECK_FALSE(res.homogeneous);
  CHECK_FALSE(res.residual.is_zero());
  Ring thirds({"a", "b"}, {frac(2, 3), frac(1, 3)});
  CHECK(euler_check(thirds.v("a") * thirds.v("b"), 1).homogeneous);
}

TEST_CASE("graded map inverse") {
  SUBCASE("linear") {
    Ring S({"s_0", "s_1"}, {Rational(1), Rational(1)});
    auto T = make_registry({"T1", "T2"}, {Rational(1), Rational(1)});
    auto g = graded_map_inverse({S.v("s_0") * Rational(2) + S.v("s_1"), S.v("s_1") * Rational(3)}, {"s_0", "s_1"}, T);
    auto y1 = MultiPoly::variable(T, *S.field, "T1"), y2 = MultiPoly::variable(T, *S.field, "T2");
    CHECK(g[0] == y1 * frac(1, 2) - y2 * frac(1, 6));
    CHECK(g[1] == y2 * frac(1, 3));
  }
  SUBCASE("r = 3 flat map") {
    Ring S({"s_0", "s_1"}, {Rational(3), Rational(2)});
    auto T = make_registry({"T1", "T2"}, {Rational(3), Rational(2)});
    auto g = graded_map_inverse({-S.v("s_0"), -S.v("s_1")}, {"s_0", "s_1"}, T);
    CHECK(g[0] == -MultiPoly::variable(T, *S.field, "T1"));
    CHECK(g[1] == -MultiPoly::variable(T, *S.field, "T2"));
  }
  SUBCASE("r = 4 flat map") {
    Ring S({"s_0", "s_1", "s_2"}, {Rational(4), Rational(3), Rational(2)});
    auto T = make_registry({"T1", "T2", "T3"}, {Rational(4), Rational(3), Rational(2)});
    auto s0 = S.v("s_0"), s1 = S.v("s_1"), s2 = S.v("s_2");
    auto g = graded_map_inverse({-s0 + s2.pow(2) * frac(1, 8), -s1, -s2}, {"s_0", "s_1", "s_2"}, T);
    auto T1 = MultiPoly::variable(T, *S.field, "T1"), T3 = MultiPoly::variable(T, *S.field, "T3");
    CHECK(g[0] == -T1 + T3.pow(2) * frac(1, 8));
    CHECK(g[1] == -MultiPoly::variable(T, *S.field, "T2"));
    CHECK(g[2] == -T3);
  }
  SUBCASE("singular linear part") {
    Ring S({"s_0", "s_1"}, {Rational(2), Rational(1)});
    auto T = make_registry({"T1", "T2"}, {Rational(2), Rational(1)});
    CHECK_THROWS_AS(graded_map_inverse({S.v("s_1").pow(2), S.v("s_1")}, {"s_0", "s_1"}, T), PolynomialError);
  }
}

TEST_CASE("graded map inverse round trips on seeded random maps") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  const std::vector<int> w = {6, 5, 4, 3, 2};
  std::vector<Rational> wr(w.begin(), w.end());
  Ring S({"s_0", "s_1", "s_2", "s_3", "s_4"}, wr, 10);
  auto T = make_registry({"y0", "y1", "y2", "y3", "y4"}, wr);
  std::vector<std::string> names = {"s_0", "s_1", "s_2", "s_3", "s_4"};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<MultiPoly> f;
    for (std::size_t i = 0; i < w.size(); ++i) {
      MultiPoly fi = S.v(names[i]) * (S.zeta(static_cast<int>(i) + trial) * Rational(1 + static_cast<int>(i)));
      for (const auto& e : monomials_of_weight(w, w[i])) {
        int total = 0;
        for (int k : e) total += k;
        if (total > 1) fi.add_term(e, Cyclotomic(*S.field, frac(num(rng), den(rng))));
      }
      f.push_back(fi);
    }
    auto g = graded_map_inverse(f, names, T);
    // g o f = id.
    std::map<std::string, MultiPoly> back;
    for (std::size_t i = 0; i < w.size(); ++i) back.emplace(T->name(i), f[i]);
    for (std::size_t j = 0; j < w.size(); ++j) CHECK(g[j].substitute(back) == S.v(names[j]));
  }
}

TEST_CASE("staircase reduction") {
  Ring R({"x", "s_1"}, {Rational(1), Rational(2)});
  auto x = R.v("x"), s1 = R.v("s_1");
  CHECK(reduce_mod_staircase(x.pow(2), {x.pow(2) * Rational(3)}, {"x"}).normal_form.is_zero());
  const auto gen = x.pow(2) * Rational(3) + s1;
  auto red = reduce_mod_staircase(x.pow(3), {gen}, {"x"});
  CHECK(red.normal_form == -(s1 * x) * frac(1, 3));
  CHECK(red.cofactors[0] == x * frac(1, 3));

  Ring D({"x1", "x2", "s11", "s10", "s01"});
  auto x1 = D.v("x1"), x2 = D.v("x2"), s11 = D.v("s11"), s10 = D.v("s10"), s01 = D.v("s01");
  std::vector<MultiPoly> jac = {x1.pow(2) * Rational(3) + s11 * x2 + s10, x2.pow(2) * Rational(3) + s11 * x1 + s01};
  auto p = x1.pow(2) * x2;
  auto d = reduce_mod_staircase(p, jac, {"x1", "x2"});
  CHECK(d.normal_form.degree_in("x1") <= 1);
  CHECK(d.normal_form.degree_in("x2") <= 1);
  CHECK(d.cofactors[0] * jac[0] + d.cofactors[1] * jac[1] + d.normal_form == p);
  // Hand division: x1^2 x2 = (x2/3) g1 - (s11/3) x2^2 - (s10/3) x2, then x2^2 = g2/3 - (s11 x1 + s01)/3.
  CHECK(d.normal_form == (s11.pow(2) * x1 + s11 * s01) * frac(1, 9) - s10 * x2 * frac(1, 3));
  std::map<std::string, MultiPoly> at_zero = {{"s11", D.zero()}, {"s10", D.zero()}, {"s01", D.zero()}};
  CHECK(d.normal_form.substitute(at_zero).is_zero());

  CHECK_THROWS_AS(reduce_mod_staircase(p, {x1 * x2 + x1}, {"x1", "x2"}), PolynomialError);
  CHECK_THROWS_AS(reduce_mod_staircase(p, {s11 * x1.pow(2)}, {"x1", "x2"}), PolynomialError);
  CHECK_THROWS_AS(reduce_mod_staircase(p, {x1.pow(2), x1.pow(3)}, {"x1", "x2"}), PolynomialError);
}

TEST_CASE("algebraic properties on seeded random polynomials") {
  std::mt19937_64 rng(99);
  Ring R({"a", "b", "c"}, {Rational(3), Rational(2), Rational(1)}, 6);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_poly(R, rng, 6, 3);
    auto A = std::map<std::string, MultiPoly>{{"a", random_poly(R, rng, 2, 1)}, {"b", random_poly(R, rng, 2, 1)}};
    auto B = std::map<std::string, MultiPoly>{{"b", random_poly(R, rng, 2, 1)}, {"c", random_poly(R, rng, 2, 1)}};
    // (p o A) o B = p o (A o B), where A o B applies B to A's images and keeps B on the rest.
    std::map<std::string, MultiPoly> composed = B;
    for (const auto& [k, v] : A) composed.insert_or_assign(k, v.substitute(B));
    composed.try_emplace("c", R.v("c").substitute(B));
    CHECK(p.substitute(A).substitute(B) == p.substitute(composed));
    CHECK(p.derivative("a").derivative("b") == p.derivative("b").derivative("a"));
    CHECK(p.derivative("c").derivative("b") == p.derivative("b").derivative("c"));
  }
  for (int d = 3; d <= 9; ++d) {
    MultiPoly h = R.zero();
    for (const auto& e : monomials_of_weight({3, 2, 1}, d)) h.add_term(e, Cyclotomic(*R.field, Rational(1 + e[0])));
    REQUIRE(euler_check(h, d).homogeneous);
    CHECK(euler_check(h.derivative("a"), d - 3).homogeneous);
    CHECK(euler_check(h.derivative("b"), d - 2).homogeneous);
    CHECK(euler_check(h.derivative("c"), d - 1).homogeneous);
  }
}

TEST_CASE("staircase cofactors reconstruct on seeded random inputs") {
  std::mt19937_64 rng(3);
  Ring D({"x1", "x2", "s11", "s10", "s01", "s00"});
  auto x1 = D.v("x1"), x2 = D.v("x2");
  std::vector<MultiPoly> jac = {x1.pow(2) * Rational(3) + D.v("s11") * x2 + D.v("s10"),
                                x2.pow(2) * Rational(3) + D.v("s11") * x1 + D.v("s01")};
  for (int trial = 0; trial < 15; ++trial) {
    auto p = random_poly(D, rng, 5, 3);
    auto red = reduce_mod_staircase(p, jac, {"x1", "x2"});
    CHECK(red.normal_form.degree_in("x1") <= 1);
    CHECK(red.normal_form.degree_in("x2") <= 1);
    CHECK(red.cofactors[0] * jac[0] + red.cofactors[1] * jac[1] + red.normal_form == p);
  }
}

TEST_CASE("split and embed") {
  Ring R({"t", "u", "v"});
  auto p = R.v("t") * R.v("u") + R.v("u").pow(2) * Rational(3) + R.v("v");
  auto parts = p.split_by({1});
  CHECK(parts.size() == 3);
  CHECK(parts.at({1}) == R.v("t"));
  CHECK(parts.at({2}) == R.c(3));
  auto bigger = make_registry({"v", "u", "t", "w"}, std::vector<Rational>(4, Rational(1)));
  auto q = p.embed(bigger);
  CHECK(q.size() == 3);
  CHECK(q.embed(R.reg) == p);
  CHECK_THROWS_AS(R.v("t").embed(make_registry({"u"}, {Rational(1)})), PolynomialError);
  CHECK(p.to_string() == "t*u + 3*u^2 + v");
}

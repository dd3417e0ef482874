#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "rspin/scalar.hpp"

using namespace rspin;

namespace {

// Test-side oracle: evaluate power-basis coordinates at exp(2 pi i / m) directly.
std::complex<double> eval_coords(const std::vector<Rational>& coords, int m) {
  const double pi = std::acos(-1.0);
  std::complex<double> z = std::polar(1.0, 2 * pi / m), acc = 0, p = 1;
  for (const auto& c : coords) {
    acc += c.get_d() * p;
    p *= z;
  }
  return acc;
}

Cyclotomic random_element(const CyclotomicField& f, std::mt19937_64& rng, long bound) {
  std::uniform_int_distribution<long> num(-bound, bound), den(1, 9);
  std::vector<Rational> coords;
  for (int i = 0; i < f.degree(); ++i) coords.push_back(frac(num(rng), den(rng)));
  return Cyclotomic(f, coords);
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<Rational>{-1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<Rational>{1, 0, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<Rational>{1, -1, 1});
  CHECK(cyclotomic_polynomial(12) == std::vector<Rational>{1, 0, -1, 0, 1});
  CHECK(cyclotomic_polynomial(9).size() == 7);
  CHECK(CyclotomicField::get(10).degree() == 4);
}

TEST_CASE("roots of -1") {
  const auto& f6 = CyclotomicField::get(6);
  const auto z6 = Cyclotomic::zeta(f6);
  CHECK(z6 * z6 * z6 == Cyclotomic(f6, Rational(-1)));
  const auto& f4 = CyclotomicField::get(4);
  const auto z4 = Cyclotomic::zeta(f4);
  CHECK(z4 * z4 == Cyclotomic(f4, Rational(-1)));
  for (int r = 2; r <= 8; ++r) {
    const auto& f = CyclotomicField::get(2 * r);
    CHECK(Cyclotomic::zeta(f).pow(r) == Cyclotomic(f, Rational(-1)));
  }
}

TEST_CASE("product reduced modulo Phi_6") {
  const auto& f = CyclotomicField::get(6);
  const auto one = Cyclotomic::one(f), z = Cyclotomic::zeta(f);
  const auto prod = (one + z) * (one - z);
  CHECK(prod == Cyclotomic(f, {Rational(2), Rational(-1)}));
  const auto value = prod.to_complex();
  const auto oracle = eval_coords({Rational(1), Rational(1)}, 6) * eval_coords({Rational(1), Rational(-1)}, 6);
  CHECK(std::abs(value - oracle) < 1e-12);
  CHECK(value.real() == doctest::Approx(1.5));
  CHECK(value.imag() == doctest::Approx(-std::sqrt(3.0) / 2));
}

TEST_CASE("inverses") {
  const auto& f = CyclotomicField::get(6);
  CHECK(Cyclotomic::one(f).inverse().is_one());
  const auto z = Cyclotomic::zeta(f);
  CHECK(z.inverse() == Cyclotomic::zeta(f, 5));
  const auto a = Cyclotomic(f, {Rational(2), Rational(-1)});
  const auto inv = a.inverse();
  CHECK((a * inv).is_one());
  // 1/(2 - z) = (1 + z)/3: (2 - z)(1 + z) = 2 + z - z^2 = 2 + z - (z - 1) = 3.
  CHECK(inv == Cyclotomic(f, {frac(1, 3), frac(1, 3)}));
  CHECK_THROWS_AS(Cyclotomic::zero(f).inverse(), ArithmeticError);
  CHECK_THROWS_AS(invert(Rational(0)), ArithmeticError);
}

TEST_CASE("order mismatch is an error") {
  const auto a = Cyclotomic::zeta(CyclotomicField::get(6));
  const auto b = Cyclotomic::zeta(CyclotomicField::get(4));
  CHECK_THROWS_AS(a + b, ArithmeticError);
  CHECK_THROWS_AS(a * b, ArithmeticError);
  CHECK_THROWS_AS((void)(a == b), ArithmeticError);
}

TEST_CASE("numeric evaluation") {
  const auto theta2 = Cyclotomic::zeta(CyclotomicField::get(4));
  auto [re, im] = theta2.numeric_eval(20);
  CHECK(std::stod(re) == doctest::Approx(0.0));
  CHECK(std::stod(im) == doctest::Approx(1.0));
  const auto theta3 = Cyclotomic::zeta(CyclotomicField::get(6));
  auto [re3, im3] = theta3.numeric_eval(30);
  CHECK(re3.rfind("0.5", 0) == 0);
  CHECK(im3.rfind("0.86602540378443864676372317075", 0) == 0);
  auto v = (theta3 * Rational(-3)).to_complex();
  CHECK(v.real() == doctest::Approx(-1.5));
  CHECK(v.imag() == doctest::Approx(-2.598076211353316));
}

TEST_CASE("monomial detection and rendering") {
  const auto& f = CyclotomicField::get(10);
  const auto a = Cyclotomic::zeta(f, 7) * Rational(3);
  auto m = a.as_monomial();
  REQUIRE(m);
  // zeta^5 = -1 here, so 3 zeta^7 = -3 zeta^2; either form reproduces a.
  CHECK(abs(m->first) == 3);
  CHECK(Cyclotomic::zeta(f, m->second) * m->first == a);
  CHECK_FALSE((Cyclotomic::one(f) + Cyclotomic::zeta(f)).as_monomial());
  CHECK(Cyclotomic(CyclotomicField::get(6), {Rational(2), Rational(-1)}).to_string() == "2 - z");
}

TEST_CASE("field axioms on seeded samples") {
  std::mt19937_64 rng(20240611);
  for (int m : {3, 4, 5, 6, 8, 10, 12}) {
    const auto& f = CyclotomicField::get(m);
    for (int trial = 0; trial < 25; ++trial) {
      const auto a = random_element(f, rng, 1000), b = random_element(f, rng, 1000), c = random_element(f, rng, 1000);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
      // numeric_eval is a ring homomorphism up to float error.
      const auto lhs = (a * b + c).to_complex();
      const auto rhs = a.to_complex() * b.to_complex() + c.to_complex();
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
      CHECK(std::abs(a.to_complex() - eval_coords(a.coords(), m)) < 1e-9);
    }
    CHECK(Cyclotomic::zeta(f).pow(m).is_one());
    // Phi_m(zeta) = 0.
    Cyclotomic acc = Cyclotomic::zero(f);
    const auto& phi = f.modulus();
    for (std::size_t i = 0; i < phi.size(); ++i) acc += Cyclotomic::zeta(f, static_cast<int>(i)) * phi[i];
    CHECK(acc.is_zero());
  }
}

TEST_CASE("rational helpers") {
  CHECK(parse_rational("-6/4") == frac(-3, 2));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK(factorial(5) == 120);
  CHECK(binomial(frac(1, 2), 2) == frac(-1, 8));
  CHECK(binomial(Rational(-1), 3) == -1);
}

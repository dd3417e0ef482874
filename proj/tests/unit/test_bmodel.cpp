#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "rspin/bmodel.hpp"

using namespace rspin;

namespace {

using cd = std::complex<double>;

// Roots of a complex polynomial (constant term first) by Durand-Kerner.
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
  for (int it = 0; it < 500; ++it) {
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

// Test-side residue oracle: Res_{x=inf} x^k / W' = -sum_{W'(p)=0} p^k / W''(p).
cd residue_oracle(int r, const std::vector<double>& s, int k) {
  std::vector<cd> dw(r, 0.0), ddw(r - 1, 0.0);
  dw[r - 1] = r;
  for (int i = 1; i <= r - 2; ++i) dw[i - 1] += i * s[i];
  for (int i = 1; i < r; ++i) ddw[i - 1] = dw[i] * static_cast<double>(i);
  cd acc = 0;
  for (auto p : roots(dw)) {
    cd d2 = 0;
    for (std::size_t i = ddw.size(); i-- > 0;) d2 = d2 * p + ddw[i];
    acc -= std::pow(p, k) / d2;
  }
  return acc;
}

Cyclotomic at_point(const ASession& S, const MultiPoly& p, const std::vector<Rational>& s) {
  std::map<std::string, MultiPoly> b;
  for (int i = 0; i <= S.r() - 2; ++i) b.emplace(ASession::s_name(i), MultiPoly::constant(p.registry(), S.field(), s[i]));
  return *p.substitute(b).constant_value();
}

}  // namespace

TEST_CASE("invalid r") { CHECK_THROWS_AS(ASession(1), std::invalid_argument); }

TEST_CASE("Saito metric examples") {
  ASession s2(2);
  CHECK(s2.saito_metric()[0][0] == MultiPoly::constant(s2.deform_registry(), s2.field(), Rational(1)));
  ASession s3(3);
  const auto& g = s3.saito_metric();
  CHECK(g[0][0].is_zero());
  CHECK(g[1][1].is_zero());
  CHECK(g[0][1] == MultiPoly::constant(s3.deform_registry(), -(s3.theta() * s3.theta())));
  // In t coordinates g_01 becomes -theta^3 = 1.
  CHECK(s3.transformed_metric()[0][1] == s3.t_const(Cyclotomic::one(s3.field())));
}

TEST_CASE("Saito metric against a numerical residue oracle") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-9, 9);
  for (int r = 2; r <= 6; ++r) {
    CAPTURE(r);
    ASession S(r);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<Rational> s;
      std::vector<double> sd;
      for (int i = 0; i <= r - 2; ++i) {
        s.push_back(frac(num(rng), 4));
        sd.push_back(s.back().get_d());
      }
      const cd theta2 = (S.theta() * S.theta()).to_complex();
      for (int i = 0; i <= r - 2; ++i) {
        for (int j = 0; j <= r - 2; ++j) {
          const cd exact = at_point(S, S.saito_metric()[i][j], s).to_complex();
          const cd oracle = theta2 * static_cast<double>(r) * residue_oracle(r, sd, i + j);
          CHECK(std::abs(exact - oracle) < 1e-7 * std::max(1.0, std::abs(oracle)));
        }
      }
    }
  }
}

TEST_CASE("flat coordinates") {
  ASession s2(2);
  CHECK(s2.flat_coordinates()[0] == -s2.s(0));
  ASession s3(3);
  CHECK(s3.flat_coordinates()[0] == -s3.s(0));
  CHECK(s3.flat_coordinates()[1] == -s3.s(1));
  ASession s4(4);
  CHECK(s4.flat_coordinates()[0] == -s4.s(0) + s4.s(2).pow(2) * frac(1, 8));
  CHECK(s4.flat_coordinates()[1] == -s4.s(1));
  CHECK(s4.flat_coordinates()[2] == -s4.s(2));
}

TEST_CASE("v coordinates satisfy v_a = -(a/r) T^{r-a}") {
  ASession s3(3);
  CHECK(s3.v_coordinates()[0] == s3.s(1) * frac(1, 3));
  CHECK(s3.v_coordinates()[1] == s3.s(0) * frac(2, 3));
  ASession s4(4);
  CHECK(s4.v_coordinates()[2] == s4.s(0) * frac(3, 4) - s4.s(2).pow(2) * frac(3, 32));
  for (int r = 2; r <= 6; ++r) {
    CAPTURE(r);
    ASession S(r);
    for (int a = 1; a <= r - 1; ++a) {
      const MultiPoly lemma = S.v_coordinates()[a - 1] + S.flat_coordinates()[r - a - 1] * frac(a, r);
      CHECK(lemma.is_zero());
    }
  }
}

TEST_CASE("mirror coordinate change s(t)") {
  ASession s2(2);
  CHECK(s2.s_of_t()[0] == s2.t(0));
  ASession s3(3);
  CHECK(s3.s_of_t()[0] == s3.t(0));
  CHECK(s3.s_of_t()[1] == s3.t(1) * s3.theta());
  ASession s4(4);
  const auto& st = s4.s_of_t();
  Exponents e0(s4.t_registry()->size(), 0), e2 = e0;
  e0[0] = 1;
  e2[2] = 1;
  CHECK(st[0].coefficient(e0).is_one());
  REQUIRE(st[2].size() == 1);
  const auto c = st[2].coefficient(e2);
  CHECK(std::abs(std::abs(c.to_complex()) - 1.0) < 1e-12);
  CHECK(st[0] == s4.t(0) - s4.t(2).pow(2) * frac(1, 8));
}

TEST_CASE("flatness of the transformed metric for r = 2..6") {
  for (int r = 2; r <= 6; ++r) {
    CAPTURE(r);
    ASession S(r);
    const auto G = S.transformed_metric();
    for (int a = 0; a <= r - 2; ++a) {
      for (int b = 0; b <= r - 2; ++b) {
        const MultiPoly expected = a + b == r - 2 ? S.t_const(Cyclotomic::one(S.field())) : MultiPoly(S.t_registry(), S.field());
        CHECK(G[a][b] == expected);
      }
    }
  }
}

TEST_CASE("structure constants") {
  ASession s3(3);
  const auto& c3 = s3.structure_constants_s();
  CHECK(c3[0][1][1] == s3.s(1) * frac(-1, 3));
  CHECK(c3[1][1][1].is_zero());
  ASession s4(4);
  const auto& c4 = s4.structure_constants_s();
  // x^4 = (x/4)(4x^3 + 2 s_2 x + s_1) - (s_2/2) x^2 - (s_1/4) x.
  CHECK(c4[2][2][2] == s4.s(2) * frac(-1, 2));
  CHECK(c4[1][2][2] == s4.s(1) * frac(-1, 4));
  CHECK(c4[0][2][2].is_zero());
  for (int r = 2; r <= 6; ++r) {
    CAPTURE(r);
    ASession S(r);
    const auto& c = S.structure_constants_s();
    const int n = r - 1;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const auto expected = j == k ? MultiPoly::constant(S.deform_registry(), S.field(), Rational(1))
                                     : MultiPoly(S.deform_registry(), S.field());
        CHECK(c[k][0][j] == expected);
      }
    }
    // Associativity of the Jacobian algebra.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            MultiPoly lhs(S.deform_registry(), S.field()), rhs = lhs;
            for (int m = 0; m < n; ++m) {
              lhs += c[m][i][j] * c[l][m][k];
              rhs += c[m][j][k] * c[l][i][m];
            }
            CHECK(lhs == rhs);
          }
        }
      }
    }
  }
}

TEST_CASE("weighted homogeneity of every constructed polynomial") {
  for (int r = 2; r <= 6; ++r) {
    CAPTURE(r);
    ASession S(r);
    CHECK(euler_check(S.deformation(), Rational(r)).homogeneous);
    for (int a = 1; a <= r - 1; ++a) {
      CHECK(euler_check(S.flat_coordinates()[a - 1], Rational(r - a + 1)).homogeneous);
      CHECK(euler_check(S.v_coordinates()[a - 1], Rational(a + 1)).homogeneous);
    }
    for (int i = 0; i <= r - 2; ++i) CHECK(euler_check(S.s_of_t()[i], Rational(r - i)).homogeneous);
    for (int i = 0; i <= r - 2; ++i) {
      for (int j = 0; j <= r - 2; ++j) CHECK(euler_check(S.saito_metric()[i][j], Rational(i + j + 2 - r)).homogeneous);
    }
    CHECK(euler_check(S.bmodel_potential(), Rational(2 * r + 2)).homogeneous);
  }
}

TEST_CASE("B-model potential") {
  ASession s2(2);
  CHECK(s2.bmodel_potential() == s2.t(0).pow(3) * frac(1, 6));
  ASession s3(3);
  CHECK(s3.bmodel_potential() == s3.t(0).pow(2) * s3.t(1) * frac(1, 2) + s3.t(1).pow(4) * frac(1, 72));
  ASession s4(4);
  const auto t0 = s4.t(0), t1 = s4.t(1), t2 = s4.t(2);
  CHECK(s4.bmodel_potential() == t0.pow(2) * t2 * frac(1, 2) + t0 * t1.pow(2) * frac(1, 2) +
                                     t1.pow(2) * t2.pow(2) * frac(1, 16) + t2.pow(5) * frac(1, 960));
  for (int r = 2; r <= 6; ++r) {
    CAPTURE(r);
    ASession S(r);
    const MultiPoly f0 = S.bmodel_potential().derivative(std::size_t{0});
    for (int a = 0; a <= r - 2; ++a) {
      for (int b = 0; b <= r - 2; ++b) {
        const auto d = f0.derivative(static_cast<std::size_t>(a)).derivative(static_cast<std::size_t>(b));
        CHECK(d == (a + b == r - 2 ? S.t_const(Cyclotomic::one(S.field())) : MultiPoly(S.t_registry(), S.field())));
      }
    }
    CHECK(S.bmodel_potential().has_rational_coefficients());
  }
}

TEST_CASE("integration rejects inconsistent tensors") {
  ASession S(3);
  const auto z = MultiPoly(S.t_registry(), S.field());
  PolyMatrix h(2, std::vector<MultiPoly>(2, z));
  h[0][1] = S.t(0);
  h[1][0] = S.t(1);
  CHECK_THROWS_AS(integrate_second_derivatives(h, {0, 1}), PolynomialError);
  h[1][0] = S.t(0);
  h[0][0] = S.t(1);
  h[1][1] = z;
  // d/dt_1 of h_00 = 1 but d/dt_0 of h_01 = 1 as well: closed, integrates to t_0^2 t_1 / 2.
  CHECK(integrate_second_derivatives(h, {0, 1}) == S.t(0).pow(2) * S.t(1) * frac(1, 2));
}

#include "rspin/d4.hpp"

#include <functional>
#include <set>
#include <numeric>

#include "rspin/amodel.hpp"
#include "rspin/linalg.hpp"

namespace rspin {

namespace {

constexpr int kCoords = 4;

const CyclotomicField& rationals() { return CyclotomicField::get(1); }

RegistryPtr make_s_registry() {
  return make_registry({"x1", "x2", "s00", "s10", "s01", "s11"},
                       {Rational(1), Rational(1), Rational(3), Rational(2), Rational(2), Rational(1)});
}

RegistryPtr make_t_registry() {
  return make_registry({"t00", "t10", "t01", "t11", "x1", "x2"},
                       {Rational(1), frac(2, 3), frac(2, 3), frac(1, 3), frac(1, 3), frac(1, 3)});
}

Exponents exps_of(const RegistryPtr& reg, std::initializer_list<std::pair<const char*, int>> powers) {
  Exponents e(reg->size(), 0);
  for (const auto& [name, k] : powers) e[reg->index_of(name)] = k;
  return e;
}

Rational rational_coeff(const MultiPoly& p, const Exponents& e) { return p.coefficient(e).rational(); }

// The quotient algebra Q[x1, x2]/(dW) at a rational point of the s space.
class PointAlgebra {
 public:
  PointAlgebra(const D4Session& d, const std::vector<Rational>& s_point) : d_(d) {
    if (s_point.size() != kCoords) throw std::invalid_argument("sample point needs four coordinates");
    for (int k = 0; k < kCoords; ++k) {
      binding_.emplace(D4Session::s_names()[k], MultiPoly::constant(d.s_registry(), rationals(), s_point[k]));
    }
    for (const auto& g : d.jacobian_ideal()) gens_.push_back(g.substitute(binding_));
    try {
      mj_inv_ = inverse(multiplication_matrix(d.hessian_determinant()), Rational(0), Rational(1));
    } catch (const SingularMatrixError&) {
      throw DegenerateSampleError("multiplication by the Hessian is singular at this sample point");
    }
  }

  Rational residue(const MultiPoly& phi) const {
    const auto m = multiplication_matrix(phi);
    Rational tr = 0;
    for (int i = 0; i < kCoords; ++i) {
      for (int k = 0; k < kCoords; ++k) tr += m[i][k] * mj_inv_[k][i];
    }
    return tr;
  }

 private:
  Matrix<Rational> multiplication_matrix(const MultiPoly& phi) const {
    const MultiPoly p = phi.substitute(binding_);
    Matrix<Rational> m(kCoords, std::vector<Rational>(kCoords, Rational(0)));
    for (int col = 0; col < kCoords; ++col) {
      const auto nf = reduce_mod_staircase(p * d_.basis(col), gens_, {"x1", "x2"}).normal_form;
      for (int row = 0; row < kCoords; ++row) {
        const auto [i, j] = D4Session::index_pair(row);
        m[row][col] = rational_coeff(nf, exps_of(d_.s_registry(), {{"x1", i}, {"x2", j}}));
      }
    }
    return m;
  }

  const D4Session& d_;
  std::map<std::string, MultiPoly> binding_;
  std::vector<MultiPoly> gens_;
  Matrix<Rational> mj_inv_;
};

MultiPoly substitute_s_of_t(const D4Session& d, const MultiPoly& p) {
  const auto st = d.s_of_t();
  std::map<std::string, MultiPoly> b;
  for (int k = 0; k < kCoords; ++k) b.emplace(D4Session::s_names()[k], st[k]);
  return p.substitute(b);
}

Matrix<Rational> eta_w33() {
  Matrix<Rational> eta(kCoords, std::vector<Rational>(kCoords, Rational(0)));
  for (int k = 0; k < kCoords; ++k) eta[k][kCoords - 1 - k] = 1;
  return eta;
}

}  // namespace

D4Session::D4Session()
    : field_(&rationals()), s_reg_(make_s_registry()), t_reg_(make_t_registry()), w_(s_reg_, *field_) {
  w_ = x(1).pow(3) + x(2).pow(3) + s(3) * x(1) * x(2) + s(2) * x(2) + s(1) * x(1) + s(0);
}

const std::vector<std::string>& D4Session::s_names() {
  static const std::vector<std::string> names{"s00", "s10", "s01", "s11"};
  return names;
}

const std::vector<std::string>& D4Session::t_names() {
  static const std::vector<std::string> names{"t00", "t10", "t01", "t11"};
  return names;
}

std::pair<int, int> D4Session::index_pair(int k) {
  static const std::pair<int, int> pairs[kCoords] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  return pairs[k];
}

std::vector<MultiPoly> D4Session::jacobian_ideal() const { return {w_.derivative("x1"), w_.derivative("x2")}; }

MultiPoly D4Session::hessian_determinant() const {
  const auto d1 = w_.derivative("x1"), d2 = w_.derivative("x2");
  return d1.derivative("x1") * d2.derivative("x2") - d1.derivative("x2") * d2.derivative("x1");
}

MultiPoly D4Session::basis(int k) const {
  const auto [i, j] = index_pair(k);
  return x(1).pow(static_cast<unsigned>(i)) * x(2).pow(static_cast<unsigned>(j));
}

std::vector<PolyMatrix> D4Session::structure_constants_s() const {
  std::vector<PolyMatrix> c(kCoords, PolyMatrix(kCoords, std::vector<MultiPoly>(kCoords, MultiPoly(s_reg_, *field_))));
  const auto gens = jacobian_ideal();
  for (int a = 0; a < kCoords; ++a) {
    for (int b = a; b < kCoords; ++b) {
      const auto nf = reduce_mod_staircase(basis(a) * basis(b), gens, {"x1", "x2"}).normal_form;
      for (int k = 0; k < kCoords; ++k) {
        const auto [i, j] = index_pair(k);
        MultiPoly coeff = nf.coeff_in_var("x1", i).coeff_in_var("x2", j);
        c[k][a][b] = coeff;
        c[k][b][a] = coeff;
      }
    }
  }
  return c;
}

std::vector<MultiPoly> D4Session::t_of_s() const {
  return {s(0) + s(3).pow(3) * frac(1, 54), -s(1), -s(2), s(3)};
}

std::vector<MultiPoly> D4Session::s_of_t() const {
  const auto flat = make_registry(t_names(), {Rational(1), frac(2, 3), frac(2, 3), frac(1, 3)});
  auto inv = graded_map_inverse(t_of_s(), s_names(), flat);
  for (auto& p : inv) p = p.embed(t_reg_);
  return inv;
}

MultiPoly D4Session::deformation_at_t() const { return substitute_s_of_t(*this, w_); }

BootstrapProblem w33_bootstrap_problem(const D4Session& d, bool mod_rules) {
  BootstrapProblem p;
  p.registry = d.t_registry();
  p.vars = {0, 1, 2, 3};
  p.total_degree = frac(7, 3);
  p.eta = eta_w33();
  p.unit = 0;
  if (mod_rules) {
    p.selection = [](const Exponents& e) {
      int alpha = 0, beta = 0;
      for (int k = 0; k < kCoords; ++k) {
        alpha += D4Session::index_pair(k).first * e[k];
        beta += D4Session::index_pair(k).second * e[k];
      }
      return alpha % 3 == 1 && beta % 3 == 1;
    };
  }
  const auto& reg = p.registry;
  p.seeds[exps_of(reg, {{"t11", 1}, {"t00", 2}})] = frac(1, 2);
  p.seeds[exps_of(reg, {{"t01", 1}, {"t10", 1}, {"t00", 1}})] = 1;
  p.seeds[exps_of(reg, {{"t11", 1}, {"t10", 3}})] = frac(1, 3) / 6;
  p.seeds[exps_of(reg, {{"t11", 1}, {"t01", 3}})] = frac(1, 3) / 6;
  if (!mod_rules) {
    // The remaining three-point correlators vanish; the equations need them pinned.
    for (const auto& e : admissible_monomials(p, 3)) p.seeds.emplace(e, Rational(0));
  }
  return p;
}

MultiPoly w33_bootstrap(const D4Session& d, bool mod_rules) {
  const auto res = wdvv_solve(w33_bootstrap_problem(d, mod_rules));
  if (!res.unique()) throw BootstrapError("W33 bootstrap is not unique (" + res.defect() + ")");
  return res.potential;
}

MultiPoly w33_closed_form(const D4Session& d) {
  const auto t00 = d.t(0), t10 = d.t(1), t01 = d.t(2), t11 = d.t(3);
  return t00.pow(2) * t11 * frac(1, 2) + t00 * t10 * t01 + t10.pow(3) * t11 * frac(1, 18) + t01.pow(3) * t11 * frac(1, 18) +
         t10 * t01 * t11.pow(3) * frac(1, 54) + t11.pow(7) * frac(1, 68040);
}

Rational bivariate_residue(const D4Session& d, const MultiPoly& phi, const std::vector<Rational>& s_point) {
  return PointAlgebra(d, s_point).residue(phi);
}

SamplePoints::SamplePoints(std::uint64_t seed) : state_(seed) {}

std::vector<Rational> SamplePoints::next() {
  // splitmix64, so the sequence does not depend on the standard library.
  auto step = [this] {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  std::vector<Rational> out;
  for (int k = 0; k < kCoords; ++k) {
    const long num = static_cast<long>(step() % 13) - 6;
    const long den = static_cast<long>(step() % 5) + 1;
    out.push_back(frac(num, den));
  }
  return out;
}

InterpolatedMetric saito_metric_w33(const D4Session& d, std::uint64_t seed, int degree_bound) {
  if (degree_bound < 1) throw std::invalid_argument("degree bound must be at least 1");
  const auto& reg = d.s_registry();
  std::vector<std::size_t> svars;
  for (const auto& n : D4Session::s_names()) svars.push_back(reg->index_of(n));
  std::vector<Exponents> monomials;
  {
    BootstrapProblem shape;
    shape.registry = make_registry({"a", "b", "c", "e"}, std::vector<Rational>(kCoords, Rational(1)));
    shape.vars = {0, 1, 2, 3};
    for (int deg = 0; deg <= degree_bound; ++deg) {
      shape.total_degree = deg;
      for (const auto& e : admissible_monomials(shape, deg)) monomials.push_back(e);
    }
  }
  // Residue targets x1^a x2^b, a, b in 0..2, indexed a + 3b.
  std::vector<MultiPoly> targets;
  for (int b = 0; b <= 2; ++b) {
    for (int a = 0; a <= 2; ++a) targets.push_back(d.x(1).pow(static_cast<unsigned>(a)) * d.x(2).pow(static_cast<unsigned>(b)));
  }
  const std::size_t n = monomials.size(), m = targets.size();
  auto monomial_values = [&](const std::vector<Rational>& s) {
    std::vector<Rational> row;
    for (const auto& e : monomials) {
      Rational v = 1;
      for (int k = 0; k < kCoords; ++k) {
        for (int p = 0; p < e[k]; ++p) v *= s[k];
      }
      row.push_back(v);
    }
    return row;
  };

  InterpolatedMetric out;
  out.degree_bound = degree_bound;
  SamplePoints points(seed);
  auto next_algebra = [&](std::vector<Rational>& s) {
    for (;;) {
      s = points.next();
      try {
        return PointAlgebra(d, s);
      } catch (const DegenerateSampleError&) {
        ++out.skipped;
      }
    }
  };

  Matrix<Rational> rows;
  std::size_t rank = 0;
  const std::size_t max_samples = 4 * n + 16;
  while (rank < n) {
    if (out.samples >= max_samples) throw InterpolationError("interpolation matrix stays singular");
    std::vector<Rational> s;
    const PointAlgebra alg = next_algebra(s);
    ++out.samples;
    auto row = monomial_values(s);
    for (const auto& t : targets) row.push_back(alg.residue(t));
    rows.push_back(std::move(row));
    if (rows.size() < n) continue;
    Matrix<Rational> work = rows;
    rank = rref(work, n).size();
    if (rank == n) rows = std::move(work);
  }
  for (std::size_t i = n; i < rows.size(); ++i) {
    for (std::size_t j = n; j < n + m; ++j) {
      if (!is_zero(rows[i][j])) throw InterpolationError("interpolation system is inconsistent; raise the degree bound");
    }
  }
  std::vector<MultiPoly> interpolants;
  for (std::size_t t = 0; t < m; ++t) {
    MultiPoly p(reg, rationals());
    for (std::size_t i = 0; i < n; ++i) {
      Exponents e(reg->size(), 0);
      for (int k = 0; k < kCoords; ++k) e[svars[k]] = monomials[i][k];
      p.add_term(e, Cyclotomic(rationals(), rows[i][n + t]));
    }
    interpolants.push_back(std::move(p));
  }
  for (int h = 0; h < 2; ++h) {
    std::vector<Rational> s;
    const PointAlgebra alg = next_algebra(s);
    ++out.holdouts;
    const auto vals = monomial_values(s);
    for (std::size_t t = 0; t < m; ++t) {
      Rational predicted = 0;
      for (std::size_t i = 0; i < n; ++i) predicted += vals[i] * rows[i][n + t];
      if (predicted != alg.residue(targets[t])) {
        throw InterpolationError("holdout sample disagrees with the interpolant; raise the degree bound");
      }
    }
  }
  out.metric.assign(kCoords, std::vector<MultiPoly>(kCoords, MultiPoly(reg, rationals())));
  for (int p = 0; p < kCoords; ++p) {
    for (int q = 0; q < kCoords; ++q) {
      const auto [i1, j1] = D4Session::index_pair(p);
      const auto [i2, j2] = D4Session::index_pair(q);
      out.metric[p][q] = interpolants[(i1 + i2) + 3 * (j1 + j2)] * Rational(9);
    }
  }
  return out;
}

VerificationReport verify_w33_bootstrap(const D4Session& d) {
  VerificationReport rep;
  rep.identity = "w33-bootstrap";
  rep.singularity = "D4";
  const auto res = wdvv_solve(w33_bootstrap_problem(d));
  rep.add_check({0}, res.unique(), res.unique() ? "unique" : res.defect());
  rep.add_residual({1}, res.potential - w33_closed_form(d), "closed form");
  const Exponents top = exps_of(d.t_registry(), {{"t11", 7}});
  rep.add_check({2}, res.potential.coefficient(top) == Cyclotomic(rationals(), frac(1, 68040)), "coefficient of t11^7 is 1/68040");
  rep.add_check({3}, correlator_extract(res.potential, {3, 1, 1, 1}) == frac(1, 3), "<tau11 tau10^3> = 1/3");
  rep.add_residual({4}, euler_check(res.potential, frac(7, 3)).residual, "Euler grading, total degree 7/3");
  const auto inv = inverse(eta_w33(), Rational(0), Rational(1));
  const std::vector<std::size_t> vars{0, 1, 2, 3};
  bool wdvv = true;
  for (std::size_t a = 0; a < 4 && wdvv; ++a) {
    for (std::size_t b = 0; b < 4 && wdvv; ++b) {
      for (std::size_t c = b + 1; c < 4 && wdvv; ++c) {
        for (std::size_t e = 0; e < 4 && wdvv; ++e) wdvv = wdvv_expression(res.potential, vars, inv, a, b, c, e).is_zero();
      }
    }
  }
  rep.add_check({5}, wdvv, "WDVV");
  const auto first_only = wdvv_solve(w33_bootstrap_problem(d, false));
  rep.metadata["degree-rule-only"] =
      first_only.unique() && first_only.potential == res.potential ? "unique, same potential" : "not unique: " + first_only.defect();
  return rep;
}

VerificationReport verify_w33_metric(const D4Session& d, const InterpolatedMetric& g) {
  VerificationReport rep;
  rep.identity = "w33-metric";
  rep.singularity = "D4";
  rep.metadata["orientation"] = "Res(det Hess) = +4";
  rep.metadata["samples"] = std::to_string(g.samples);
  rep.metadata["holdouts"] = std::to_string(g.holdouts);
  rep.metadata["degree-bound"] = std::to_string(g.degree_bound);
  for (int p = 0; p < kCoords; ++p) {
    for (int q = 0; q < kCoords; ++q) {
      MultiPoly expected(d.s_registry(), d.field());
      if (p + q == kCoords - 1) expected = MultiPoly::constant(d.s_registry(), d.field(), Rational(1));
      if (p == 3 && q == 3) expected = d.s(3).pow(2) * frac(1, 9);
      rep.add_residual({p, q}, g.metric[p][q] - expected);
      const auto [i1, j1] = D4Session::index_pair(p);
      const auto [i2, j2] = D4Session::index_pair(q);
      rep.add_residual({10, p, q}, euler_check(g.metric[p][q], Rational(i1 + i2 + j1 + j2 - 2)).residual, "grading");
    }
  }
  SamplePoints pts(12345);
  for (int k = 0; k < 3; ++k) {
    std::vector<Rational> s = pts.next();
    try {
      const PointAlgebra alg(d, s);
      rep.add_check({20, k}, alg.residue(d.hessian_determinant()) == 4, "Res(J) = 4");
      Matrix<Rational> pairing(kCoords, std::vector<Rational>(kCoords));
      for (int p = 0; p < kCoords; ++p) {
        for (int q = 0; q < kCoords; ++q) pairing[p][q] = alg.residue(d.basis(p) * d.basis(q));
      }
      rep.add_check({21, k}, !is_zero(determinant(pairing, Rational(0), Rational(1))), "residue pairing nondegenerate");
    } catch (const DegenerateSampleError&) {
      rep.add_check({20, k}, true, "degenerate sample skipped");
    }
  }
  return rep;
}

VerificationReport verify_d4_flat_change(const D4Session& d, const InterpolatedMetric& g, const MultiPoly& f) {
  VerificationReport rep;
  rep.identity = "d4-flat";
  rep.singularity = "D4";
  const auto st = d.s_of_t();
  const auto tos = d.t_of_s();
  {
    std::map<std::string, MultiPoly> b;
    for (int k = 0; k < kCoords; ++k) b.emplace(D4Session::s_names()[k], st[k]);
    for (int k = 0; k < kCoords; ++k) rep.add_residual({0, k}, tos[k].substitute(b) - d.t(k), "t(s(t)) = t");
  }
  PolyMatrix jac(kCoords, std::vector<MultiPoly>(kCoords, MultiPoly(d.t_registry(), d.field())));
  for (int i = 0; i < kCoords; ++i) {
    for (int a = 0; a < kCoords; ++a) jac[i][a] = st[i].derivative(static_cast<std::size_t>(a));
  }
  PolyMatrix gt(kCoords, std::vector<MultiPoly>(kCoords, MultiPoly(d.t_registry(), d.field())));
  for (int i = 0; i < kCoords; ++i) {
    for (int j = 0; j < kCoords; ++j) gt[i][j] = substitute_s_of_t(d, g.metric[i][j]);
  }
  PolyMatrix lowered(kCoords, std::vector<MultiPoly>(kCoords, MultiPoly(d.t_registry(), d.field())));
  for (int k = 0; k < kCoords; ++k) {
    for (int b = 0; b < kCoords; ++b) {
      for (int m = 0; m < kCoords; ++m) lowered[k][b] += gt[k][m] * jac[m][b];
    }
  }
  const auto eta = eta_w33();
  for (int a = 0; a < kCoords; ++a) {
    for (int b = 0; b < kCoords; ++b) {
      MultiPoly gab(d.t_registry(), d.field());
      for (int k = 0; k < kCoords; ++k) gab += jac[k][a] * lowered[k][b];
      rep.add_residual({1, a, b}, gab - MultiPoly::constant(d.t_registry(), d.field(), eta[a][b]), "J^T g J = eta");
    }
  }
  auto cs = d.structure_constants_s();
  for (auto& mat : cs) {
    for (auto& row : mat) {
      for (auto& e : row) e = substitute_s_of_t(d, e);
    }
  }
  const MultiPoly ft = f.embed(d.t_registry());
  for (int a = 0; a < kCoords; ++a) {
    for (int b = a; b < kCoords; ++b) {
      for (int c = b; c < kCoords; ++c) {
        MultiPoly cabc(d.t_registry(), d.field());
        for (int i = 0; i < kCoords; ++i) {
          if (jac[i][a].is_zero()) continue;
          for (int j = 0; j < kCoords; ++j) {
            if (jac[j][b].is_zero()) continue;
            for (int k = 0; k < kCoords; ++k) {
              if (cs[k][i][j].is_zero() || lowered[k][c].is_zero()) continue;
              cabc += jac[i][a] * jac[j][b] * cs[k][i][j] * lowered[k][c];
            }
          }
        }
        const auto d3 = ft.derivative(static_cast<std::size_t>(a)).derivative(static_cast<std::size_t>(b)).derivative(
            static_cast<std::size_t>(c));
        rep.add_residual({2, a, b, c}, cabc - d3, "c_abc(t) = d^3 F");
      }
    }
  }
  const auto f0 = ft.derivative(std::size_t{0});
  for (int a = 0; a < kCoords; ++a) {
    for (int b = a; b < kCoords; ++b) {
      const auto d3 = f0.derivative(static_cast<std::size_t>(a)).derivative(static_cast<std::size_t>(b));
      rep.add_residual({3, a, b}, d3 - MultiPoly::constant(d.t_registry(), d.field(), eta[a][b]), "unit axiom");
    }
  }
  return rep;
}

VerificationReport verify_d4_extended(const D4Session& d) {
  VerificationReport rep;
  rep.identity = "d4-extended";
  rep.singularity = "D4";
  const auto x1 = d.tx(1), x2 = d.tx(2);
  const auto t00 = d.t(0), t10 = d.t(1), t01 = d.t(2), t11 = d.t(3);
  const MultiPoly w = d.deformation_at_t();
  const MultiPoly p = w.substitute({{"x1", x1 * frac(1, 3)}, {"x2", x2 * frac(1, 3)}});
  const MultiPoly closed = x1.pow(3) * frac(1, 27) + x2.pow(3) * frac(1, 27) + t11 * x1 * x2 * frac(1, 9) -
                           t10 * x1 * frac(1, 3) - t01 * x2 * frac(1, 3) + t00 - t11.pow(3) * frac(1, 54);
  rep.add_residual({0}, p - closed, "P(t, x) = W_{s(t)}(x1/3, x2/3) closed form");

  const auto& reg = d.t_registry();
  auto coeff = [&](std::initializer_list<std::pair<const char*, int>> powers) {
    return p.coefficient(exps_of(reg, powers)).rational();
  };
  struct Alpha {
    int index;
    Rational value, expected;
    std::string source;
  };
  const std::vector<Alpha> alphas = {
      {1, coeff({{"x1", 3}}) * 6, one_point_value(3, 2), "<tau_{-1} tau_2^4>, 3-spin"},
      {2, coeff({{"x2", 3}}) * 6, one_point_value(3, 2), "<tau_{-1} tau_2^4>, 3-spin"},
      {3, coeff({{"t11", 1}, {"x1", 1}, {"x2", 1}}), frac(1, 9), "pinned"},
      {4, coeff({{"t10", 1}, {"x1", 1}}), one_point_value(3, 1), "<tau_{-1} tau_2^2 tau_1>, 3-spin"},
      {5, coeff({{"t01", 1}, {"x2", 1}}), one_point_value(3, 1), "<tau_{-1} tau_2^2 tau_1>, 3-spin"},
      {6, coeff({{"t00", 1}}), Rational(1), "pinned"},
      {7, coeff({{"t11", 3}}) * 6, frac(-1, 9), "pinned"},
  };
  for (const auto& a : alphas) {
    rep.add_check({1, a.index}, a.value == a.expected,
                  "alpha_" + std::to_string(a.index) + " = " + to_string(a.value) + ", expected " + to_string(a.expected) +
                      " (" + a.source + ")");
  }
  const MultiPoly p3 = p.substitute({{"x1", x1 * Rational(3)}, {"x2", x2 * Rational(3)}});
  const auto st = d.s_of_t();
  for (int k = 0; k < kCoords; ++k) {
    const auto [i, j] = D4Session::index_pair(k);
    rep.add_residual({2, i, j}, st[k] - p3.coeff_in_var("x1", i).coeff_in_var("x2", j), "s_ij(t) = Coef P(t, 3x)");
  }
  return rep;
}

VerificationReport compare_d4_transpose(const D4Session& d, const MultiPoly& f_w33) {
  VerificationReport rep;
  rep.identity = "d4-transpose";
  rep.singularity = "D4";
  const auto& Q = rationals();
  const auto reg = make_registry({"t1", "tX", "tY", "tX2", "u", "w"}, std::vector<Rational>(6, Rational(1)));
  auto v = [&](const char* n) { return MultiPoly::variable(reg, Q, n); };
  const auto t1 = v("t1"), tX = v("tX"), tY = v("tY"), tX2 = v("tX2"), u = v("u"), w = v("w");
  const auto a = u.pow(3);
  const MultiPoly fd4 = tX.pow(2) * t1 * frac(1, 12) - tY.pow(2) * t1 * frac(1, 4) + tX2 * t1.pow(2) * frac(1, 12) +
                        a * tX.pow(3) * tX2 * frac(1, 6) + a * tX * tY.pow(2) * tX2 * frac(3, 2) + a.pow(2) * tX.pow(2) * tX2.pow(3) -
                        a.pow(2) * tY.pow(2) * tX2.pow(3) * Rational(3) + a.pow(4) * tX2.pow(7) * frac(36, 35);
  // beta = 3^{2/3} a^{1/3}, gamma = 3 3^{1/6} a^{1/3}, delta = 6 3^{1/3} a^{2/3}.
  const auto beta = w.pow(4) * u, gamma = w * u * Rational(3), delta = w.pow(2) * u.pow(2) * Rational(6);
  const MultiPoly substituted = f_w33.embed(d.t_registry()).substitute(
      {{"t00", t1}, {"t10", beta * tX + gamma * tY}, {"t01", beta * tX - gamma * tY}, {"t11", delta * tX2}});
  // F_D4 = F_W33 / (36 3^{1/3} a^{2/3})  <=>  36 w^2 u^2 F_D4 = F_W33.
  const MultiPoly diff = fd4 * w.pow(2) * u.pow(2) * Rational(36) - substituted;
  const MultiPoly w6 = w.pow(6) - MultiPoly::constant(reg, Q, Rational(3));
  const std::size_t ui = reg->index_of("u");
  const auto pieces = (fd4 * w.pow(2) * u.pow(2) * Rational(36)).split_by({ui});
  const auto sub_pieces = substituted.split_by({ui});
  std::set<int> grades;
  for (const auto& [e, piece] : pieces) grades.insert(e[0]);
  for (const auto& [e, piece] : sub_pieces) grades.insert(e[0]);
  for (int grade : grades) {
    MultiPoly lhs(reg, Q), rhs(reg, Q);
    for (const auto& [e, piece] : pieces) {
      if (e[0] == grade) lhs = piece;
    }
    for (const auto& [e, piece] : sub_pieces) {
      if (e[0] == grade) rhs = piece;
    }
    rep.add_residual({grade}, reduce_mod_staircase(lhs - rhs, {w6}, {"w"}).normal_form, "u-grade " + std::to_string(grade));
  }
  rep.add_residual({-1}, reduce_mod_staircase(diff, {w6}, {"w"}).normal_form, "full identity");
  rep.metadata["formal"] = "u = a^{1/3}, w = 3^{1/6} with w^6 = 3";
  return rep;
}

}  // namespace rspin

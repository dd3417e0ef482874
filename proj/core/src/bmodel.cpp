#include "rspin/bmodel.hpp"

#include <numeric>

namespace rspin {

namespace {

RegistryPtr make_deform_registry(int r) {
  std::vector<std::string> names = {"x"};
  std::vector<Rational> weights = {Rational(1)};
  for (int i = 0; i <= r - 2; ++i) {
    names.push_back(ASession::s_name(i));
    weights.emplace_back(r - i);
  }
  return make_registry(names, weights);
}

RegistryPtr make_t_registry(int r) {
  std::vector<std::string> names;
  std::vector<Rational> weights;
  for (int a = 0; a <= r - 1; ++a) {
    names.push_back(ASession::t_name(a));
    weights.emplace_back(r - a);
  }
  names.emplace_back("x");
  weights.emplace_back(1);
  return make_registry(names, weights);
}

RegistryPtr make_flat_registry(int r) {
  std::vector<std::string> names;
  std::vector<Rational> weights;
  for (int a = 1; a <= r - 1; ++a) {
    names.push_back(ASession::flat_name(a));
    weights.emplace_back(r - a + 1);
  }
  return make_registry(names, weights);
}

int checked_r(int r) {
  if (r < 2) throw std::invalid_argument("r must be at least 2");
  return r;
}

int ordinary_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

}  // namespace

ASession::ASession(int r, int floor)
    : r_(checked_r(r)),
      floor_(floor == 0 ? -(r + 2) : floor),
      field_(&CyclotomicField::get(2 * r)),
      theta_(Cyclotomic::zeta(*field_)),
      deform_(make_deform_registry(r)),
      t_(make_t_registry(r)),
      flat_(make_flat_registry(r)),
      w_(deform_, *field_) {
  w_ = x().pow(static_cast<unsigned>(r));
  for (int i = 0; i <= r - 2; ++i) w_ += s(i) * x().pow(static_cast<unsigned>(i));
}

const PolyMatrix& ASession::saito_metric() const {
  if (metric_) return *metric_;
  const auto dw = LaurentSeries::from_polynomial(w_.derivative("x"), "x");
  const auto inv = dw.invert(-(2 * r_ - 2));
  const Cyclotomic scale = theta_ * theta_ * Rational(r_);
  PolyMatrix g(r_ - 1, std::vector<MultiPoly>(r_ - 1, MultiPoly(deform_, *field_)));
  for (int i = 0; i <= r_ - 2; ++i) {
    for (int j = i; j <= r_ - 2; ++j) {
      const auto num = LaurentSeries::from_polynomial(x().pow(static_cast<unsigned>(i + j)), "x");
      g[i][j] = (num * inv).residue_at_infinity() * scale;
      g[j][i] = g[i][j];
    }
  }
  metric_ = std::move(g);
  return *metric_;
}

const std::vector<MultiPoly>& ASession::flat_coordinates() const {
  if (flat_coords_) return *flat_coords_;
  const auto k = monic_root(w_, "x", r_, floor_);
  const auto x_of_k = k.revert("k");
  std::vector<MultiPoly> out;
  for (int a = 1; a <= r_ - 1; ++a) out.push_back(x_of_k.coefficient(-(r_ - a)) * Rational(r_));
  flat_coords_ = std::move(out);
  return *flat_coords_;
}

const std::vector<MultiPoly>& ASession::v_coordinates() const {
  if (v_coords_) return *v_coords_;
  std::vector<MultiPoly> out;
  for (int a = 1; a <= r_ - 1; ++a) out.push_back(-fractional_power(w_, "x", a, r_, floor_).residue_at_infinity());
  v_coords_ = std::move(out);
  return *v_coords_;
}

const std::vector<MultiPoly>& ASession::s_of_flat() const {
  if (s_of_flat_) return *s_of_flat_;
  std::vector<std::string> sources;
  for (int i = 0; i <= r_ - 2; ++i) sources.push_back(s_name(i));
  s_of_flat_ = graded_map_inverse(flat_coordinates(), sources, flat_);
  return *s_of_flat_;
}

const std::vector<MultiPoly>& ASession::s_of_t() const {
  if (s_of_t_) return *s_of_t_;
  std::map<std::string, MultiPoly> bind;
  for (int a = 0; a <= r_ - 2; ++a) bind.emplace(flat_name(a + 1), t(a) * Cyclotomic::zeta(*field_, a - r_));
  std::vector<MultiPoly> out;
  for (const auto& p : s_of_flat()) out.push_back(p.substitute(bind));
  s_of_t_ = std::move(out);
  return *s_of_t_;
}

const PolyMatrix& ASession::jacobian_s_t() const {
  if (jac_) return *jac_;
  PolyMatrix j;
  for (const auto& si : s_of_t()) {
    std::vector<MultiPoly> row;
    for (int a = 0; a <= r_ - 2; ++a) row.push_back(si.derivative(t_name(a)));
    j.push_back(std::move(row));
  }
  jac_ = std::move(j);
  return *jac_;
}

const std::vector<PolyMatrix>& ASession::structure_constants_s() const {
  if (structure_s_) return *structure_s_;
  const std::size_t n = static_cast<std::size_t>(r_ - 1);
  std::vector<PolyMatrix> c(n, PolyMatrix(n, std::vector<MultiPoly>(n, MultiPoly(deform_, *field_))));
  const MultiPoly dw = w_.derivative("x");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto nf = reduce_mod_staircase(x().pow(static_cast<unsigned>(i + j)), {dw}, {"x"}).normal_form;
      for (std::size_t k = 0; k < n; ++k) {
        c[k][i][j] = nf.coeff_in_var("x", static_cast<int>(k));
        c[k][j][i] = c[k][i][j];
      }
    }
  }
  structure_s_ = std::move(c);
  return *structure_s_;
}

FrobeniusData ASession::frobenius_s() const {
  FrobeniusData d;
  for (int i = 0; i <= r_ - 2; ++i) d.coords.push_back(s_name(i));
  d.metric = saito_metric();
  d.structure = structure_constants_s();
  d.unit = 0;
  return d;
}

MultiPoly ASession::at_s_of_t(const MultiPoly& p) const {
  std::map<std::string, MultiPoly> bind;
  for (int i = 0; i <= r_ - 2; ++i) bind.emplace(s_name(i), s_of_t()[i]);
  bind.emplace("x", t_x());
  return p.substitute(bind);
}

PolyMatrix ASession::transformed_metric() const {
  const std::size_t n = static_cast<std::size_t>(r_ - 1);
  const auto& J = jacobian_s_t();
  PolyMatrix g_t(n, std::vector<MultiPoly>(n, MultiPoly(t_, *field_)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g_t[i][j] = at_s_of_t(saito_metric()[i][j]);
  PolyMatrix out(n, std::vector<MultiPoly>(n, MultiPoly(t_, *field_)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!g_t[i][j].is_zero()) out[a][b] += g_t[i][j] * J[i][a] * J[j][b];
  return out;
}

const std::vector<PolyMatrix>& ASession::lowered_structure_t() const {
  if (lowered_t_) return *lowered_t_;
  const std::size_t n = static_cast<std::size_t>(r_ - 1);
  const auto& J = jacobian_s_t();
  const MultiPoly zero(t_, *field_);
  // L[k][c] = sum_l g_kl(s(t)) J[l][c].
  PolyMatrix L(n, std::vector<MultiPoly>(n, zero));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const MultiPoly g = at_s_of_t(saito_metric()[k][l]);
      if (g.is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) L[k][c] += g * J[l][c];
    }
  std::vector<PolyMatrix> cs(n);
  for (std::size_t k = 0; k < n; ++k) {
    cs[k] = PolyMatrix(n, std::vector<MultiPoly>(n, zero));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cs[k][i][j] = at_s_of_t(structure_constants_s()[k][i][j]);
  }
  std::vector<PolyMatrix> out(n, PolyMatrix(n, std::vector<MultiPoly>(n, zero)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      // M^k_ab = sum_ij J_ia J_jb c^k_ij.
      std::vector<MultiPoly> m(n, zero);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (!cs[k][i][j].is_zero() && !J[i][a].is_zero() && !J[j][b].is_zero())
              m[k] += cs[k][i][j] * J[i][a] * J[j][b];
      for (std::size_t c = 0; c < n; ++c) {
        MultiPoly v = zero;
        for (std::size_t k = 0; k < n; ++k)
          if (!m[k].is_zero()) v += m[k] * L[k][c];
        out[a][b][c] = v;
        out[b][a][c] = v;
      }
    }
  lowered_t_ = std::move(out);
  return *lowered_t_;
}

const MultiPoly& ASession::bmodel_potential() const {
  if (potential_) return *potential_;
  std::vector<std::size_t> vars;
  for (int a = 0; a <= r_ - 2; ++a) vars.push_back(t_->index_of(t_name(a)));
  potential_ = integrate_third_derivatives(lowered_structure_t(), vars);
  return *potential_;
}

MultiPoly integrate_third_derivatives(const std::vector<PolyMatrix>& c, const std::vector<std::size_t>& vars) {
  const std::size_t n = vars.size();
  const MultiPoly& any = c.at(0).at(0).at(0);
  const RegistryPtr& reg = any.registry();
  std::vector<MultiPoly> t;
  for (auto v : vars) t.push_back(MultiPoly::variable(reg, any.field(), reg->name(v)));
  MultiPoly sum(reg, any.field());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d = 0; d < n; ++d)
        if (!c[a][b][d].is_zero()) sum += c[a][b][d] * t[a] * t[b] * t[d];
  MultiPoly f(reg, any.field());
  for (const auto& [e, coeff] : sum.terms()) {
    const int d = ordinary_degree(e);
    f.add_term(e, coeff * invert(Rational(d * (d - 1) * (d - 2))));
  }
  for (std::size_t a = 0; a < n; ++a) {
    const MultiPoly fa = f.derivative(vars[a]);
    for (std::size_t b = 0; b < n; ++b) {
      const MultiPoly fab = fa.derivative(vars[b]);
      for (std::size_t d = 0; d < n; ++d)
        if (fab.derivative(vars[d]) != c[a][b][d])
          throw PolynomialError("integrate: tensor is not a third-derivative tensor");
    }
  }
  return f;
}

MultiPoly integrate_second_derivatives(const PolyMatrix& h, const std::vector<std::size_t>& vars) {
  const std::size_t n = vars.size();
  const MultiPoly& any = h.at(0).at(0);
  const RegistryPtr& reg = any.registry();
  std::vector<MultiPoly> t;
  for (auto v : vars) t.push_back(MultiPoly::variable(reg, any.field(), reg->name(v)));
  MultiPoly sum(reg, any.field());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (!h[a][b].is_zero()) sum += h[a][b] * t[a] * t[b];
  MultiPoly f(reg, any.field());
  for (const auto& [e, coeff] : sum.terms()) {
    const int d = ordinary_degree(e);
    f.add_term(e, coeff * invert(Rational(d * (d - 1))));
  }
  for (std::size_t a = 0; a < n; ++a) {
    const MultiPoly fa = f.derivative(vars[a]);
    for (std::size_t b = 0; b < n; ++b)
      if (fa.derivative(vars[b]) != h[a][b]) throw PolynomialError("integrate: matrix is not a Hessian");
  }
  return f;
}

}  // namespace rspin

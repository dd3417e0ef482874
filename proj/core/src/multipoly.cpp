#include "rspin/multipoly.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "rspin/linalg.hpp"

namespace rspin {

VarRegistry::VarRegistry(std::vector<std::string> names, std::vector<Rational> weights)
    : names_(std::move(names)), weights_(std::move(weights)) {
  if (names_.size() != weights_.size()) throw PolynomialError("registry: names and weights differ in length");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw PolynomialError("registry: duplicate variable '" + n + "'");
  }
}

std::optional<std::size_t> VarRegistry::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t VarRegistry::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw PolynomialError("unknown variable '" + std::string(name) + "'");
}

RegistryPtr make_registry(std::vector<std::string> names, std::vector<Rational> weights) {
  return std::make_shared<const VarRegistry>(std::move(names), std::move(weights));
}

bool same_registry(const RegistryPtr& a, const RegistryPtr& b) { return a == b || *a == *b; }

MultiPoly::MultiPoly(RegistryPtr registry, const CyclotomicField& field)
    : registry_(std::move(registry)), field_(&field) {}

MultiPoly MultiPoly::constant(RegistryPtr registry, const Cyclotomic& value) {
  MultiPoly p(std::move(registry), value.field());
  p.add_term(Exponents(p.vars().size(), 0), value);
  return p;
}

MultiPoly MultiPoly::constant(RegistryPtr registry, const CyclotomicField& field, const Rational& value) {
  return constant(std::move(registry), Cyclotomic(field, value));
}

MultiPoly MultiPoly::variable(RegistryPtr registry, const CyclotomicField& field, std::string_view name) {
  Exponents e(registry->size(), 0);
  e[registry->index_of(name)] = 1;
  return monomial(std::move(registry), Cyclotomic::one(field), std::move(e));
}

MultiPoly MultiPoly::monomial(RegistryPtr registry, const Cyclotomic& coeff, Exponents exps) {
  if (exps.size() != registry->size()) throw PolynomialError("monomial: exponent vector has wrong length");
  MultiPoly p(std::move(registry), coeff.field());
  p.add_term(exps, coeff);
  return p;
}

std::optional<Cyclotomic> MultiPoly::constant_value() const {
  if (terms_.empty()) return Cyclotomic::zero(*field_);
  if (terms_.size() > 1) return std::nullopt;
  const auto& [e, c] = *terms_.begin();
  for (int v : e)
    if (v != 0) return std::nullopt;
  return c;
}

Cyclotomic MultiPoly::coefficient(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? Cyclotomic::zero(*field_) : it->second;
}

void MultiPoly::add_term(const Exponents& exps, const Cyclotomic& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void MultiPoly::check_compatible(const MultiPoly& q, const char* op) const {
  if (!same_registry(registry_, q.registry_)) throw PolynomialError(std::string(op) + ": registry mismatch");
  if (field_ != q.field_) throw ArithmeticError(std::string(op) + ": coefficient field mismatch");
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& q) {
  check_compatible(q, "add");
  for (const auto& [e, c] : q.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& q) {
  check_compatible(q, "sub");
  for (const auto& [e, c] : q.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Cyclotomic& c) {
  if (&c.field() != field_) throw ArithmeticError("scale: coefficient field mismatch");
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& p, const MultiPoly& q) {
  p.check_compatible(q, "mul");
  MultiPoly r(p.registry_, *p.field_);
  const std::size_t n = p.vars().size();
  Exponents e(n);
  for (const auto& [ep, cp] : p.terms_) {
    for (const auto& [eq, cq] : q.terms_) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ep[i] + eq[i];
      auto [it, inserted] = r.terms_.try_emplace(e, cp);
      if (inserted) {
        it->second *= cq;
      } else {
        it->second += cp * cq;
      }
    }
  }
  std::erase_if(r.terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(registry_, *field_, Rational(1));
  MultiPoly base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

bool operator==(const MultiPoly& p, const MultiPoly& q) {
  p.check_compatible(q, "compare");
  return p.terms_ == q.terms_;
}

MultiPoly MultiPoly::derivative(std::string_view var) const { return derivative(vars().index_of(var)); }

MultiPoly MultiPoly::derivative(std::size_t var) const {
  if (var >= vars().size()) throw PolynomialError("derivative: variable index out of range");
  MultiPoly r(registry_, *field_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.terms_.emplace(std::move(d), c * Rational(e[var]));
  }
  return r;
}

MultiPoly MultiPoly::substitute(const std::map<std::string, MultiPoly>& bindings) const {
  if (bindings.empty()) return *this;
  const RegistryPtr& target = bindings.begin()->second.registry();
  const std::size_t n = vars().size();
  std::vector<std::optional<MultiPoly>> image(n);
  for (const auto& [name, poly] : bindings) {
    vars().index_of(name);
    if (!same_registry(poly.registry(), target)) throw PolynomialError("substitute: bindings span several registries");
    if (&poly.field() != field_) throw ArithmeticError("substitute: coefficient field mismatch");
  }
  std::vector<bool> used(n, false);
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < n; ++i)
      if (e[i] > 0) used[i] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) continue;
    auto it = bindings.find(vars().name(i));
    if (it != bindings.end()) {
      image[i] = it->second;
    } else {
      image[i] = variable(target, *field_, vars().name(i));
    }
  }
  // powers[i][k] = image[i]^k, filled on demand.
  std::vector<std::vector<MultiPoly>> powers(n);
  auto power = [&](std::size_t i, int k) -> const MultiPoly& {
    auto& list = powers[i];
    if (list.empty()) list.push_back(constant(target, *field_, Rational(1)));
    while (static_cast<int>(list.size()) <= k) list.push_back(list.back() * *image[i]);
    return list[static_cast<std::size_t>(k)];
  };
  MultiPoly result(target, *field_);
  for (const auto& [e, c] : terms_) {
    MultiPoly term = constant(target, c);
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] > 0) term = term * power(i, e[i]);
    }
    result += term;
  }
  return result;
}

MultiPoly MultiPoly::embed(const RegistryPtr& target) const {
  if (same_registry(registry_, target)) {
    MultiPoly r = *this;
    r.registry_ = target;
    return r;
  }
  const std::size_t n = vars().size();
  std::vector<std::optional<std::size_t>> map(n);
  for (std::size_t i = 0; i < n; ++i) map[i] = target->find(vars().name(i));
  MultiPoly r(target, *field_);
  for (const auto& [e, c] : terms_) {
    Exponents f(target->size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      if (!map[i]) throw PolynomialError("embed: variable '" + vars().name(i) + "' missing from target registry");
      f[*map[i]] = e[i];
    }
    r.add_term(f, c);
  }
  return r;
}

MultiPoly MultiPoly::coeff_in_var(std::string_view var, int k) const {
  const std::size_t v = vars().index_of(var);
  MultiPoly r(registry_, *field_);
  if (k < 0) return r;
  for (const auto& [e, c] : terms_) {
    if (e[v] != k) continue;
    Exponents f = e;
    f[v] = 0;
    r.terms_.emplace(std::move(f), c);
  }
  return r;
}

std::map<Exponents, MultiPoly> MultiPoly::split_by(const std::vector<std::size_t>& split_vars) const {
  std::map<Exponents, MultiPoly> out;
  for (const auto& [e, c] : terms_) {
    Exponents key(split_vars.size());
    Exponents rest = e;
    for (std::size_t j = 0; j < split_vars.size(); ++j) {
      key[j] = e[split_vars[j]];
      rest[split_vars[j]] = 0;
    }
    auto it = out.try_emplace(std::move(key), registry_, *field_).first;
    it->second.add_term(rest, c);
  }
  return out;
}

int MultiPoly::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

MultiPoly MultiPoly::homogeneous_part(int d) const {
  MultiPoly r(registry_, *field_);
  for (const auto& [e, c] : terms_)
    if (std::accumulate(e.begin(), e.end(), 0) == d) r.terms_.emplace(e, c);
  return r;
}

MultiPoly MultiPoly::truncate_degree(int d) const {
  MultiPoly r(registry_, *field_);
  for (const auto& [e, c] : terms_)
    if (std::accumulate(e.begin(), e.end(), 0) <= d) r.terms_.emplace(e, c);
  return r;
}

Rational MultiPoly::weighted_degree(const Exponents& exps) const {
  Rational w(0);
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] != 0) w += vars().weight(i) * exps[i];
  return w;
}

bool MultiPoly::depends_on(std::size_t var) const {
  for (const auto& [e, c] : terms_)
    if (e[var] != 0) return true;
  return false;
}

bool MultiPoly::has_rational_coefficients() const {
  for (const auto& [e, c] : terms_)
    if (!c.is_rational()) return false;
  return true;
}

MultiPoly MultiPoly::over(const CyclotomicField& field) const {
  if (&field == field_) return *this;
  MultiPoly r(registry_, field);
  for (const auto& [e, c] : terms_) {
    if (!c.is_rational()) throw ArithmeticError("over: coefficient is not rational");
    r.terms_.emplace(e, Cyclotomic(field, c.rational()));
  }
  return r;
}

std::string MultiPoly::to_string(std::string_view zeta_symbol) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars().name(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    std::string coeff;
    bool negative = false;
    if (c.is_rational()) {
      Rational q = c.rational();
      negative = sgn(q) < 0;
      q = abs(q);
      if (mono.empty() || q != 1) coeff = q.get_str();
    } else {
      coeff = "(" + c.to_string(zeta_symbol) + ")";
    }
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    out << coeff;
    if (!coeff.empty() && !mono.empty()) out << "*";
    out << mono;
    first = false;
  }
  return out.str();
}

std::string to_string(const MultiPoly& p) { return p.to_string(); }

EulerCheck euler_check(const MultiPoly& p, const Rational& total_degree) {
  MultiPoly residual(p.registry(), p.field());
  for (const auto& [e, c] : p.terms()) {
    Rational factor = p.weighted_degree(e) - total_degree;
    if (sgn(factor) != 0) residual.add_term(e, c * factor);
  }
  return {residual.is_zero(), residual};
}

std::vector<MultiPoly> graded_map_inverse(const std::vector<MultiPoly>& maps,
                                          const std::vector<std::string>& source_vars,
                                          const RegistryPtr& target) {
  const std::size_t n = maps.size();
  if (n == 0) return {};
  if (source_vars.size() != n || target->size() != n) {
    throw PolynomialError("graded_map_inverse: map count, source variables and target registry must agree");
  }
  const CyclotomicField& field = maps.front().field();
  const RegistryPtr& source = maps.front().registry();
  std::vector<std::size_t> src(n);
  for (std::size_t j = 0; j < n; ++j) src[j] = source->index_of(source_vars[j]);

  // Linear part and weighted-homogeneity checks.
  Matrix<Cyclotomic> linear(n, std::vector<Cyclotomic>(n, Cyclotomic::zero(field)));
  std::vector<MultiPoly> nonlinear;
  Rational min_degree(0);
  for (std::size_t i = 0; i < n; ++i) {
    const MultiPoly& f = maps[i];
    if (!same_registry(f.registry(), source)) throw PolynomialError("graded_map_inverse: maps span several registries");
    std::optional<Rational> degree;
    MultiPoly rest = f;
    for (const auto& [e, c] : f.terms()) {
      Rational w = f.weighted_degree(e);
      if (degree && w != *degree) throw PolynomialError("graded_map_inverse: component " + std::to_string(i) + " is not weighted-homogeneous");
      degree = w;
      const int total = std::accumulate(e.begin(), e.end(), 0);
      if (total == 0) throw PolynomialError("graded_map_inverse: component has a constant term");
      if (total == 1) {
        auto j = std::find_if(src.begin(), src.end(), [&](std::size_t v) { return e[v] == 1; });
        if (j == src.end()) throw PolynomialError("graded_map_inverse: component depends on a non-source variable");
        linear[i][static_cast<std::size_t>(j - src.begin())] = c;
        rest.add_term(e, -c);
      }
    }
    if (!degree || sgn(*degree) <= 0) throw PolynomialError("graded_map_inverse: components need positive degree");
    if (i == 0 || *degree < min_degree) min_degree = *degree;
    nonlinear.push_back(std::move(rest));
  }
  Matrix<Cyclotomic> inv;
  try {
    inv = inverse(linear, Cyclotomic::zero(field), Cyclotomic::one(field));
  } catch (const SingularMatrixError&) {
    throw PolynomialError("graded_map_inverse: singular linear part");
  }
  // Each g_j is homogeneous of degree weight(y_j) with every target variable of
  // degree >= min_degree, so its ordinary degree is at most this bound.
  int bound = 1;
  for (std::size_t j = 0; j < n; ++j) {
    Rational q = source->weight(src[j]) / min_degree;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    bound = std::max(bound, static_cast<int>(fl.get_si()));
  }

  std::vector<MultiPoly> y;
  for (std::size_t i = 0; i < n; ++i) y.push_back(MultiPoly::variable(target, field, target->name(i)));
  auto apply_inverse = [&](const std::vector<MultiPoly>& v) {
    std::vector<MultiPoly> out;
    for (std::size_t j = 0; j < n; ++j) {
      MultiPoly acc(target, field);
      for (std::size_t i = 0; i < n; ++i)
        if (!inv[j][i].is_zero()) acc += v[i] * inv[j][i];
      out.push_back(std::move(acc));
    }
    return out;
  };
  std::vector<MultiPoly> g = apply_inverse(y);
  for (int iter = 1; iter < bound; ++iter) {
    std::map<std::string, MultiPoly> bind;
    for (std::size_t j = 0; j < n; ++j) bind.emplace(source_vars[j], g[j]);
    std::vector<MultiPoly> rhs;
    for (std::size_t i = 0; i < n; ++i) {
      MultiPoly term = nonlinear[i].is_zero() ? MultiPoly(target, field) : nonlinear[i].substitute(bind);
      rhs.push_back((y[i] - term).truncate_degree(bound));
    }
    g = apply_inverse(rhs);
  }
  // Exact round-trip check.
  std::map<std::string, MultiPoly> bind;
  for (std::size_t j = 0; j < n; ++j) bind.emplace(source_vars[j], g[j]);
  for (std::size_t i = 0; i < n; ++i) {
    if (maps[i].substitute(bind) != y[i]) throw PolynomialError("graded_map_inverse: round trip failed");
  }
  return g;
}

std::vector<std::vector<MultiPoly>> polynomial_matrix_inverse(const std::vector<std::vector<MultiPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return {};
  const RegistryPtr& reg = m[0][0].registry();
  const CyclotomicField& field = m[0][0].field();
  Matrix<Cyclotomic> c(n, std::vector<Cyclotomic>(n, Cyclotomic::zero(field)));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw PolynomialError("matrix inverse: matrix is not square");
    for (std::size_t j = 0; j < n; ++j) c[i][j] = m[i][j].coefficient(Exponents(reg->size(), 0));
  }
  Matrix<Cyclotomic> cinv;
  try {
    cinv = inverse(c, Cyclotomic::zero(field), Cyclotomic::one(field));
  } catch (const SingularMatrixError&) {
    throw PolynomialError("matrix inverse: constant part is singular");
  }
  using PMatrix = std::vector<std::vector<MultiPoly>>;
  auto zero = MultiPoly(reg, field);
  auto mul = [&](const PMatrix& a, const PMatrix& b) {
    PMatrix out(n, std::vector<MultiPoly>(n, zero));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (a[i][k].is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (!b[k][j].is_zero()) out[i][j] += a[i][k] * b[k][j];
      }
    return out;
  };
  PMatrix cinv_p(n, std::vector<MultiPoly>(n, zero)), nil(n, std::vector<MultiPoly>(n, zero));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cinv_p[i][j] = MultiPoly::constant(reg, cinv[i][j]);
  // m = C (1 + K) with K = C^{-1} N, so m^{-1} = sum_k (-K)^k C^{-1}.
  PMatrix k_mat = mul(cinv_p, m);
  for (std::size_t i = 0; i < n; ++i) k_mat[i][i] -= MultiPoly::constant(reg, field, Rational(1));
  for (auto& row : k_mat)
    for (auto& e : row) e = -e;
  PMatrix term = cinv_p, result = cinv_p;
  for (std::size_t step = 1; step < n; ++step) {
    term = mul(k_mat, term);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) result[i][j] += term[i][j];
  }
  const PMatrix check = mul(m, result);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto expected = i == j ? MultiPoly::constant(reg, field, Rational(1)) : zero;
      if (check[i][j] != expected) throw PolynomialError("matrix inverse: remainder is not nilpotent");
    }
  return result;
}

StaircaseReduction reduce_mod_staircase(const MultiPoly& p, const std::vector<MultiPoly>& generators,
                                        const std::vector<std::string>& reduction_vars) {
  const auto& reg = p.registry();
  const CyclotomicField& field = p.field();
  std::vector<std::size_t> xs;
  for (const auto& name : reduction_vars) xs.push_back(reg->index_of(name));
  auto xdeg = [&](const Exponents& e) {
    int d = 0;
    for (auto v : xs) d += e[v];
    return d;
  };

  struct Lead {
    std::size_t var;
    int power;
    Cyclotomic inv_coeff;
    MultiPoly tail;  // generator minus its leading term
  };
  std::vector<Lead> leads;
  std::set<std::size_t> lead_vars;
  for (const auto& g : generators) {
    if (!same_registry(g.registry(), reg)) throw PolynomialError("reduce_mod_staircase: registry mismatch");
    if (g.is_zero()) throw PolynomialError("reduce_mod_staircase: zero generator");
    int top = -1;
    const Exponents* lead = nullptr;
    int ties = 0;
    for (const auto& [e, c] : g.terms()) {
      int d = xdeg(e);
      if (d > top) {
        top = d;
        lead = &e;
        ties = 1;
      } else if (d == top) {
        ++ties;
      }
    }
    if (ties != 1 || top < 1) throw PolynomialError("reduce_mod_staircase: generator lacks a unique leading pure power");
    std::optional<std::size_t> var;
    for (std::size_t i = 0; i < lead->size(); ++i) {
      if ((*lead)[i] == 0) continue;
      bool is_x = std::find(xs.begin(), xs.end(), i) != xs.end();
      if (!is_x || var) throw PolynomialError("reduce_mod_staircase: leading term is not a pure power with constant coefficient");
      var = i;
    }
    if (!lead_vars.insert(*var).second) throw PolynomialError("reduce_mod_staircase: two generators lead with the same variable");
    MultiPoly tail = g;
    Cyclotomic c = g.coefficient(*lead);
    tail.add_term(*lead, -c);
    leads.push_back({*var, top, c.inverse(), std::move(tail)});
  }

  std::vector<MultiPoly> cofactors(generators.size(), MultiPoly(reg, field));
  MultiPoly rem = p;
  for (;;) {
    // Reduce the reducible term of largest x-degree first.
    const Exponents* pick = nullptr;
    std::size_t which = 0;
    int best = -1;
    for (const auto& [e, c] : rem.terms()) {
      for (std::size_t k = 0; k < leads.size(); ++k) {
        if (e[leads[k].var] >= leads[k].power && xdeg(e) > best) {
          best = xdeg(e);
          pick = &e;
          which = k;
        }
      }
    }
    if (!pick) break;
    const Lead& L = leads[which];
    Exponents q = *pick;
    q[L.var] -= L.power;
    Cyclotomic factor = rem.coefficient(*pick) * L.inv_coeff;
    MultiPoly quotient = MultiPoly::monomial(reg, factor, q);
    cofactors[which] += quotient;
    rem.add_term(*pick, -rem.coefficient(*pick));
    rem -= quotient * L.tail;
  }
  return {rem, cofactors};
}

}  // namespace rspin

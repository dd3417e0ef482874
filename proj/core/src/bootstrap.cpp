#include "rspin/bootstrap.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <sstream>

namespace rspin {

namespace {

const CyclotomicField& rationals() { return CyclotomicField::get(1); }

Rational rational_of(const Cyclotomic& c) {
  if (!c.is_rational()) throw BootstrapError("bootstrap coefficient outside Q");
  return c.rational();
}

using Tensor3 = std::vector<std::vector<std::vector<MultiPoly>>>;

Tensor3 third_derivatives(const MultiPoly& f, const std::vector<std::size_t>& vars) {
  const std::size_t n = vars.size();
  Tensor3 d(n, std::vector<std::vector<MultiPoly>>(n, std::vector<MultiPoly>(n, MultiPoly(f.registry(), f.field()))));
  for (std::size_t a = 0; a < n; ++a) {
    const MultiPoly fa = f.derivative(vars[a]);
    for (std::size_t b = a; b < n; ++b) {
      const MultiPoly fab = fa.derivative(vars[b]);
      for (std::size_t c = b; c < n; ++c) {
        const MultiPoly fabc = fab.derivative(vars[c]);
        for (auto [i, j, k] : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c}, std::array{b, c, a},
                               std::array{c, a, b}, std::array{c, b, a}}) {
          d[i][j][k] = fabc;
        }
      }
    }
  }
  return d;
}

void enumerate(std::size_t pos, int remaining, Exponents& current, const std::vector<std::size_t>& vars,
               const std::function<void(const Exponents&)>& emit) {
  if (pos + 1 == vars.size()) {
    current[vars[pos]] = remaining;
    emit(current);
    current[vars[pos]] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[vars[pos]] = e;
    enumerate(pos + 1, remaining - e, current, vars, emit);
  }
  current[vars[pos]] = 0;
}

}  // namespace

bool BootstrapResult::unique() const {
  return std::all_of(levels.begin(), levels.end(),
                     [](const LevelReport& l) { return l.consistent && l.rank == l.unknowns; });
}

std::string BootstrapResult::defect() const {
  for (const auto& l : levels) {
    std::ostringstream out;
    if (!l.consistent) {
      out << "n=" << l.points << ": inconsistent";
      return out.str();
    }
    if (l.rank != l.unknowns) {
      out << "n=" << l.points << ": rank " << l.rank << " of " << l.unknowns << " unknowns";
      return out.str();
    }
  }
  return {};
}

std::vector<Exponents> admissible_monomials(const BootstrapProblem& problem, int points) {
  std::vector<Exponents> out;
  if (problem.vars.empty() || points < 0) return out;
  Exponents current(problem.registry->size(), 0);
  enumerate(0, points, current, problem.vars, [&](const Exponents& e) {
    Rational w = 0;
    for (auto v : problem.vars) w += problem.registry->weight(v) * e[v];
    if (w != problem.total_degree) return;
    if (problem.selection && !problem.selection(e)) return;
    out.push_back(e);
  });
  return out;
}

MultiPoly wdvv_expression(const MultiPoly& f, const std::vector<std::size_t>& vars, const Matrix<Rational>& eta_inverse,
                          std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  MultiPoly out(f.registry(), f.field());
  const auto fab = f.derivative(vars[a]).derivative(vars[b]);
  const auto fac = f.derivative(vars[a]).derivative(vars[c]);
  const auto fcd = f.derivative(vars[c]).derivative(vars[d]);
  const auto fbd = f.derivative(vars[b]).derivative(vars[d]);
  for (std::size_t mu = 0; mu < vars.size(); ++mu) {
    for (std::size_t nu = 0; nu < vars.size(); ++nu) {
      if (is_zero(eta_inverse[mu][nu])) continue;
      const Cyclotomic e(f.field(), eta_inverse[mu][nu]);
      out += (fab.derivative(vars[mu]) * fcd.derivative(vars[nu]) - fac.derivative(vars[mu]) * fbd.derivative(vars[nu])) * e;
    }
  }
  return out;
}

Rational correlator_extract(const MultiPoly& f, const std::vector<std::size_t>& key) {
  Exponents e(f.vars().size(), 0);
  for (auto k : key) {
    if (k >= e.size()) throw PolynomialError("correlator index out of range");
    ++e[k];
  }
  Rational value = rational_of(f.coefficient(e));
  for (int m : e) value *= factorial(m);
  return value;
}

BootstrapResult wdvv_solve(const BootstrapProblem& problem) {
  const auto& Q = rationals();
  const auto& reg = problem.registry;
  const std::size_t n_vars = problem.vars.size();
  if (n_vars == 0 || problem.unit >= n_vars) throw BootstrapError("bootstrap needs variables and a unit");
  if (problem.eta.size() != n_vars) throw BootstrapError("metric size does not match the variables");
  const Matrix<Rational> eta_inv = inverse(problem.eta, Rational(0), Rational(1));

  Rational min_weight = reg->weight(problem.vars[0]);
  for (auto v : problem.vars) {
    if (reg->weight(v) <= 0) throw BootstrapError("bootstrap weights must be positive");
    min_weight = std::min(min_weight, reg->weight(v));
  }
  const Rational bound_q = problem.total_degree / min_weight;
  const int max_points = static_cast<int>(mpz_class(bound_q.get_num() / bound_q.get_den()).get_si());

  // Every seed must be an admissible monomial.
  std::map<Exponents, bool> seen;
  for (int n = 3; n <= max_points; ++n) {
    for (const auto& e : admissible_monomials(problem, n)) seen[e] = true;
  }
  for (const auto& [e, value] : problem.seeds) {
    if (!seen.count(e)) throw BootstrapError("seed is not an admissible monomial");
  }

  BootstrapResult result{MultiPoly(reg, Q), {}};
  std::vector<MultiPoly> levels;  // A^(3), A^(4), ... on the problem registry

  for (int n = 3; n <= max_points; ++n) {
    LevelReport report;
    report.points = n;
    MultiPoly seeded(reg, Q);
    std::vector<Exponents> unknowns;
    for (const auto& e : admissible_monomials(problem, n)) {
      ++report.monomials;
      auto it = problem.seeds.find(e);
      if (it != problem.seeds.end()) {
        ++report.seeded;
        seeded.add_term(e, Cyclotomic(Q, it->second));
      } else if (n >= 4 && e[problem.vars[problem.unit]] > 0) {
        continue;
      } else {
        unknowns.push_back(e);
      }
    }
    report.unknowns = unknowns.size();
    if (unknowns.empty()) {
      levels.push_back(seeded);
      result.levels.push_back(report);
      continue;
    }

    std::vector<std::string> names = reg->names();
    std::vector<Rational> weights;
    for (std::size_t i = 0; i < reg->size(); ++i) weights.push_back(reg->weight(i));
    for (std::size_t j = 0; j < unknowns.size(); ++j) {
      names.push_back("__u" + std::to_string(j));
      weights.emplace_back(0);
    }
    const auto ext = make_registry(names, weights);
    MultiPoly ansatz = seeded.embed(ext);
    for (std::size_t j = 0; j < unknowns.size(); ++j) {
      Exponents e = unknowns[j];
      e.resize(ext->size(), 0);
      e[reg->size() + j] = 1;
      ansatz.add_term(e, Cyclotomic::one(Q));
    }

    // Degree n - 3 part of WDVV: pairs (p, q) of levels with p + q = n + 3.
    std::vector<Tensor3> d3;
    for (const auto& lvl : levels) d3.push_back(third_derivatives(lvl.embed(ext), problem.vars));
    d3.push_back(third_derivatives(ansatz, problem.vars));
    std::vector<std::size_t> t_indices(reg->size());
    std::iota(t_indices.begin(), t_indices.end(), 0);

    Matrix<Rational> rows;
    for (std::size_t a = 0; a < n_vars; ++a) {
      for (std::size_t b = 0; b < n_vars; ++b) {
        for (std::size_t c = b + 1; c < n_vars; ++c) {
          for (std::size_t d = 0; d < n_vars; ++d) {
            MultiPoly expr(ext, Q);
            for (std::size_t p = 0; p < d3.size(); ++p) {
              const std::size_t q = d3.size() - 1 - p;
              const auto& F = d3[p];
              const auto& G = d3[q];
              for (std::size_t mu = 0; mu < n_vars; ++mu) {
                for (std::size_t nu = 0; nu < n_vars; ++nu) {
                  if (is_zero(eta_inv[mu][nu])) continue;
                  const Rational& e = eta_inv[mu][nu];
                  expr += (F[a][b][mu] * G[nu][c][d] - F[a][c][mu] * G[nu][b][d]) * e;
                }
              }
            }
            if (expr.is_zero()) continue;
            for (const auto& [texps, piece] : expr.split_by(t_indices)) {
              std::vector<Rational> row(unknowns.size() + 1, Rational(0));
              for (const auto& [e, coeff] : piece.terms()) {
                int deg = 0;
                std::size_t which = 0;
                for (std::size_t j = 0; j < unknowns.size(); ++j) {
                  if (e[reg->size() + j] != 0) {
                    deg += e[reg->size() + j];
                    which = j;
                  }
                }
                if (deg > 1) throw BootstrapError("WDVV equation at n=" + std::to_string(n) + " is not linear; seed every three-point monomial");
                if (deg == 0) {
                  row.back() -= rational_of(coeff);
                } else {
                  row[which] += rational_of(coeff);
                }
              }
              rows.push_back(std::move(row));
            }
          }
        }
      }
    }
    report.equations = rows.size();
    const auto sol = solve_augmented(rows, unknowns.size(), Rational(0));
    report.rank = sol.rank;
    report.consistent = sol.consistent;
    result.levels.push_back(report);
    if (!sol.consistent) break;
    MultiPoly level = seeded;
    for (std::size_t j = 0; j < unknowns.size(); ++j) level.add_term(unknowns[j], Cyclotomic(Q, sol.values[j]));
    levels.push_back(level);
  }
  for (const auto& lvl : levels) result.potential += lvl;
  return result;
}

namespace {

mpz_class lcm_denominators(const std::vector<Rational>& c) {
  mpz_class l = 1;
  for (const auto& q : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

std::vector<mpz_class> divisors(const mpz_class& value) {
  mpz_class v = abs(value);
  if (v > mpz_class("1000000000000")) throw BootstrapError("univariate coefficient too large for rational root search");
  std::vector<mpz_class> small, large;
  for (mpz_class d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      small.push_back(d);
      if (d * d != v) large.push_back(v / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

Rational evaluate(const std::vector<Rational>& c, const Rational& u) {
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
  return acc;
}

// Divides by (u - root), assuming root is a root.
std::vector<Rational> deflate(const std::vector<Rational>& c, const Rational& root) {
  std::vector<Rational> out(c.size() - 1);
  Rational carry = 0;
  for (std::size_t i = c.size() - 1; i >= 1; --i) {
    carry = c[i] + carry * root;
    out[i - 1] = carry;
  }
  return out;
}

}  // namespace

std::vector<Rational> rational_roots(const std::vector<Rational>& coeffs, bool* has_other_roots) {
  std::vector<Rational> c = coeffs;
  while (!c.empty() && is_zero(c.back())) c.pop_back();
  if (c.empty()) throw BootstrapError("rational_roots of the zero polynomial");
  std::vector<Rational> roots;
  auto add = [&](const Rational& q) {
    if (std::find(roots.begin(), roots.end(), q) == roots.end()) roots.push_back(q);
  };
  while (c.size() > 1 && is_zero(c.front())) {
    add(Rational(0));
    c.erase(c.begin());
  }
  bool progress = true;
  while (c.size() > 1 && progress) {
    progress = false;
    if (c.size() == 2) {
      const Rational q = -c[0] / c[1];
      add(q);
      c = deflate(c, q);
      progress = true;
      break;
    }
    const mpz_class l = lcm_denominators(c);
    const mpz_class a0 = mpz_class(c.front() * l), an = mpz_class(c.back() * l);
    for (const auto& p : divisors(a0)) {
      for (const auto& q : divisors(an)) {
        for (int sign : {1, -1}) {
          Rational cand(p * sign, q);
          cand.canonicalize();
          if (is_zero(evaluate(c, cand))) {
            add(cand);
            c = deflate(c, cand);
            progress = true;
            break;
          }
        }
        if (progress) break;
      }
      if (progress) break;
    }
  }
  if (has_other_roots) *has_other_roots = c.size() > 1;
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace {

struct SolverState {
  std::vector<MultiPoly> equations;
  /// Eliminated unknowns and their expressions in later unknowns, in order.
  std::vector<std::pair<std::size_t, MultiPoly>> eliminated;
};

class PropagationSolver {
 public:
  PropagationSolver(RegistryPtr registry, const std::vector<std::size_t>& unknowns, std::size_t max_branches)
      : registry_(std::move(registry)), unknowns_(unknowns), max_branches_(max_branches) {}

  void run(SolverState state) {
    if (++report_.branches > max_branches_) throw BootstrapError("polynomial system exceeded the branch limit");
    const auto& reg = *registry_;
    for (;;) {
      std::vector<MultiPoly> live;
      for (auto& eq : state.equations) {
        if (eq.is_zero()) continue;
        if (eq.constant_value()) return;  // nonzero constant: no solution on this branch
        live.push_back(std::move(eq));
      }
      state.equations = std::move(live);
      if (state.equations.empty()) {
        finish(state);
        return;
      }
      if (eliminate_linear(state)) continue;
      // Branch on the lowest-degree univariate equation.
      const MultiPoly* best = nullptr;
      std::size_t best_var = 0;
      int best_deg = 0;
      for (const auto& eq : state.equations) {
        std::size_t count = 0, var = 0;
        for (auto u : unknowns_) {
          if (eq.depends_on(u)) {
            ++count;
            var = u;
          }
        }
        if (count != 1) continue;
        const int deg = eq.degree_in(var);
        if (!best || deg < best_deg) {
          best = &eq;
          best_var = var;
          best_deg = deg;
        }
      }
      if (!best) {
        finish(state);
        return;
      }
      std::vector<Rational> coeffs;
      for (int k = 0; k <= best_deg; ++k) {
        coeffs.push_back(rational_of(*best->coeff_in_var(reg.name(best_var), k).constant_value()));
      }
      bool other = false;
      const auto roots = rational_roots(coeffs, &other);
      if (other) report_.irrational_roots = true;
      for (const auto& root : roots) {
        SolverState child = state;
        assign(child, best_var, MultiPoly::constant(registry_, rationals(), root));
        run(std::move(child));
      }
      return;
    }
  }

  PolySystemReport take() { return std::move(report_); }

 private:
  static void assign(SolverState& state, std::size_t var, const MultiPoly& expr) {
    const std::map<std::string, MultiPoly> binding{{expr.vars().name(var), expr}};
    for (auto& eq : state.equations) eq = eq.substitute(binding);
    for (auto& [v, e] : state.eliminated) e = e.substitute(binding);
    state.eliminated.emplace_back(var, expr);
  }

  // Solves the linear equations and eliminates every pivot unknown.
  bool eliminate_linear(SolverState& state) {
    std::vector<const MultiPoly*> linear;
    for (const auto& eq : state.equations) {
      if (eq.total_degree() <= 1) linear.push_back(&eq);
    }
    if (linear.empty()) return false;
    const std::size_t m = unknowns_.size();
    Matrix<Rational> rows;
    for (const auto* eq : linear) {
      std::vector<Rational> row(m + 1, Rational(0));
      for (const auto& [e, c] : eq->terms()) {
        bool constant = true;
        for (std::size_t j = 0; j < m; ++j) {
          if (e[unknowns_[j]] != 0) {
            row[j] += rational_of(c);
            constant = false;
          }
        }
        if (constant) row[m] -= rational_of(c);
      }
      rows.push_back(std::move(row));
    }
    auto pivots = rref(rows, m);
    for (std::size_t i = pivots.size(); i < rows.size(); ++i) {
      if (!is_zero(rows[i][m])) {
        state.equations.assign(1, MultiPoly::constant(registry_, rationals(), Rational(1)));
        return true;
      }
    }
    if (pivots.empty()) return false;
    const auto& reg = registry_;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      MultiPoly expr = MultiPoly::constant(reg, rationals(), rows[i][m]);
      for (std::size_t j = 0; j < m; ++j) {
        if (j == pivots[i] || is_zero(rows[i][j])) continue;
        expr -= MultiPoly::variable(reg, rationals(), reg->name(unknowns_[j])) * rows[i][j];
      }
      assign(state, unknowns_[pivots[i]], expr);
    }
    return true;
  }

  void finish(SolverState& state) {
    PolySystemSolution sol;
    std::vector<std::size_t> free;
    for (auto u : unknowns_) {
      const bool elim = std::any_of(state.eliminated.begin(), state.eliminated.end(),
                                    [&](const auto& p) { return p.first == u; });
      if (!elim) free.push_back(u);
    }
    for (const auto& [v, expr] : state.eliminated) {
      if (auto c = expr.constant_value()) {
        sol.values[v] = rational_of(*c);
      } else {
        sol.undetermined.push_back(v);
      }
    }
    for (auto u : free) sol.undetermined.push_back(u);
    std::sort(sol.undetermined.begin(), sol.undetermined.end());
    report_.solutions.push_back(std::move(sol));
  }

  RegistryPtr registry_;
  std::vector<std::size_t> unknowns_;
  std::size_t max_branches_;
  PolySystemReport report_;
};

}  // namespace

PolySystemReport solve_polynomial_system(const std::vector<MultiPoly>& equations, const std::vector<std::size_t>& unknowns,
                                         std::size_t max_branches) {
  PolySystemReport empty;
  std::vector<MultiPoly> eqs;
  for (const auto& e : equations) {
    if (!e.is_zero()) eqs.push_back(e.over(rationals()));
  }
  if (eqs.empty()) {
    PolySystemSolution sol;
    sol.undetermined = unknowns;
    empty.solutions.push_back(sol);
    return empty;
  }
  PropagationSolver solver(eqs.front().registry(), unknowns, max_branches);
  solver.run(SolverState{std::move(eqs), {}});
  return solver.take();
}

}  // namespace rspin

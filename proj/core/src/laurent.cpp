#include "rspin/laurent.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace rspin {

namespace {

constexpr int kNone = INT_MAX;

// Exponent bound for the leading term: the known lead, or just below the
// floor when nothing nonzero is tracked.
int lead_bound(const LaurentSeries& s) {
  if (auto d = s.leading_exponent()) return *d;
  return s.is_exact() ? kNone : s.floor() - 1;
}

int max_floor(int a, int b) { return std::max(a, b); }

}  // namespace

LaurentSeries::LaurentSeries(std::string var, RegistryPtr coeffs, const CyclotomicField& field, int floor)
    : var_(std::move(var)), coeffs_(std::move(coeffs)), field_(&field), floor_(floor) {}

LaurentSeries LaurentSeries::from_polynomial(const MultiPoly& p, std::string_view var) {
  LaurentSeries s(std::string(var), p.registry(), p.field());
  const std::size_t v = p.vars().index_of(var);
  for (const auto& [e, c] : p.terms()) {
    Exponents rest = e;
    rest[v] = 0;
    auto it = s.terms_.try_emplace(e[v], s.zero_coeff()).first;
    it->second.add_term(rest, c);
  }
  std::erase_if(s.terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return s;
}

MultiPoly LaurentSeries::coefficient(int e) const {
  if (!is_exact() && e < floor_) {
    throw TruncationError("coefficient of " + var_ + "^" + std::to_string(e) + " lies below the tracked floor " +
                          std::to_string(floor_));
  }
  auto it = terms_.find(e);
  return it == terms_.end() ? zero_coeff() : it->second;
}

void LaurentSeries::set(int e, const MultiPoly& c) {
  if (!is_exact() && e < floor_) throw TruncationError("set: exponent below floor");
  if (!same_registry(c.registry(), coeffs_)) throw PolynomialError("set: coefficient registry mismatch");
  if (c.is_zero()) {
    terms_.erase(e);
  } else {
    terms_.insert_or_assign(e, c);
  }
}

std::optional<int> LaurentSeries::leading_exponent() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.rbegin()->first;
}

LaurentSeries LaurentSeries::truncated(int floor) const {
  LaurentSeries r = *this;
  r.floor_ = max_floor(floor_, floor);
  if (!r.is_exact()) r.terms_.erase(r.terms_.begin(), r.terms_.lower_bound(r.floor_));
  return r;
}

void LaurentSeries::check_compatible(const LaurentSeries& b, const char* op) const {
  if (var_ != b.var_) throw PolynomialError(std::string(op) + ": series variables differ");
  if (!same_registry(coeffs_, b.coeffs_)) throw PolynomialError(std::string(op) + ": coefficient registry mismatch");
  if (field_ != b.field_) throw ArithmeticError(std::string(op) + ": coefficient field mismatch");
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
  a.check_compatible(b, "add");
  LaurentSeries r = a.truncated(b.floor_);
  for (const auto& [e, c] : b.terms_) {
    if (!r.is_exact() && e < r.floor_) continue;
    auto it = r.terms_.try_emplace(e, r.zero_coeff()).first;
    it->second += c;
    if (it->second.is_zero()) r.terms_.erase(it);
  }
  return r;
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

LaurentSeries LaurentSeries::operator*(const Cyclotomic& c) const {
  LaurentSeries r = *this;
  if (c.is_zero()) {
    r.terms_.clear();
    return r;
  }
  for (auto& [e, v] : r.terms_) v *= c;
  return r;
}

LaurentSeries LaurentSeries::operator*(const Rational& c) const { return *this * Cyclotomic(*field_, c); }

LaurentSeries LaurentSeries::multiply(const LaurentSeries& a, const LaurentSeries& b, int target_floor) {
  a.check_compatible(b, "mul");
  // a = A + O(x^{fa - 1}), b = B + O(x^{fb - 1}): the unknown tail of one
  // factor times the leading term of the other reaches up to x^{fa + lb - 1}.
  int natural = LaurentSeries::kExact;
  if (!(a.terms_.empty() && a.is_exact()) && !(b.terms_.empty() && b.is_exact())) {
    const int la = lead_bound(a);
    const int lb = lead_bound(b);
    if (!b.is_exact() && la != kNone) natural = std::max(natural, la + b.floor_);
    if (!a.is_exact() && lb != kNone) natural = std::max(natural, lb + a.floor_);
  }
  LaurentSeries r(a.var_, a.coeffs_, *a.field_, max_floor(natural, target_floor));
  for (const auto& [ea, ca] : a.terms_) {
    for (auto it = b.terms_.rbegin(); it != b.terms_.rend(); ++it) {
      const int e = ea + it->first;
      if (!r.is_exact() && e < r.floor_) break;
      auto slot = r.terms_.try_emplace(e, r.zero_coeff()).first;
      slot->second += ca * it->second;
    }
  }
  std::erase_if(r.terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return r;
}

LaurentSeries LaurentSeries::pow_rational(const Rational& q, int target_floor) const {
  const bool integral = q.get_den() == 1;
  if (integral && sgn(q) >= 0 && is_exact() && target_floor == kExact) {
    LaurentSeries result(var_, coeffs_, *field_);
    result.terms_.emplace(0, MultiPoly::constant(coeffs_, *field_, Rational(1)));
    LaurentSeries base = *this;
    unsigned long n = q.get_num().get_ui();
    while (n > 0) {
      if (n & 1UL) result = result * base;
      n >>= 1UL;
      if (n > 0) base = base * base;
    }
    return result;
  }
  const auto lead = leading_exponent();
  if (!lead) throw TruncationError("pow: leading term not inside the tracked window");
  const int d = *lead;
  const auto c = terms_.at(d).constant_value();
  if (!c) throw ArithmeticError("pow: leading coefficient depends on the coefficient variables");
  Cyclotomic cq = Cyclotomic::one(*field_);
  if (integral) {
    cq = c->pow(q.get_num().get_si());
  } else if (!c->is_one()) {
    throw ArithmeticError("pow: fractional power needs leading coefficient 1");
  }
  const Rational qd_exact = q * d;
  if (qd_exact.get_den() != 1) throw ArithmeticError("pow: q times the leading exponent is not an integer");
  const int qd = static_cast<int>(qd_exact.get_num().get_si());

  const int natural = is_exact() ? kExact : qd + floor_ - d;
  const int floor = max_floor(natural, target_floor);
  if (floor == kExact) throw TruncationError("pow: infinite expansion needs a target floor");

  // h = f / (c x^d) - 1, supported on exponents <= -1.
  const int rel = floor - qd;
  const Cyclotomic cinv = c->inverse();
  LaurentSeries h(var_, coeffs_, *field_, is_exact() ? kExact : floor_ - d);
  for (const auto& [e, v] : terms_)
    if (e < d) h.terms_.emplace(e - d, v * cinv);
  h = h.truncated(rel);

  LaurentSeries sum(var_, coeffs_, *field_);
  sum.terms_.emplace(0, MultiPoly::constant(coeffs_, *field_, Rational(1)));
  LaurentSeries hk = sum;
  sum = sum.truncated(rel);
  for (int k = 1; k <= -rel; ++k) {
    hk = multiply(hk, h, rel);
    if (hk.terms_.empty()) break;
    const Rational b = binomial(q, k);
    if (sgn(b) == 0) continue;
    sum = sum + hk * b;
  }
  LaurentSeries result(var_, coeffs_, *field_, floor);
  for (const auto& [e, v] : sum.terms_) result.terms_.emplace(e + qd, v * cq);
  std::erase_if(result.terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return result;
}

LaurentSeries LaurentSeries::derivative() const {
  LaurentSeries r(var_, coeffs_, *field_, is_exact() ? kExact : floor_ - 1);
  for (const auto& [e, c] : terms_)
    if (e != 0) r.terms_.emplace(e - 1, c * Rational(e));
  return r;
}

MultiPoly LaurentSeries::residue_at_infinity() const { return -coefficient(-1); }

LaurentSeries LaurentSeries::compose(const LaurentSeries& inner, int target_floor) const {
  if (!same_registry(coeffs_, inner.coeffs_)) throw PolynomialError("compose: coefficient registry mismatch");
  if (field_ != inner.field_) throw ArithmeticError("compose: coefficient field mismatch");
  const auto inner_lead = inner.leading_exponent();
  if (!inner_lead || *inner_lead != 1) throw PolynomialError("compose: inner series must lead with its variable");
  const auto c = inner.terms_.at(1).constant_value();
  if (!c || !c->is_one()) throw PolynomialError("compose: inner leading coefficient must be 1");

  LaurentSeries result(inner.var_, coeffs_, *field_);
  if (terms_.empty()) return result.truncated(floor_);
  const int lead = terms_.rbegin()->first;
  const int low = terms_.begin()->first;
  int natural = floor_;
  if (!inner.is_exact()) natural = std::max(natural, lead + inner.floor_ - 1);
  const int floor = max_floor(natural, target_floor);
  if (floor == kExact && low < 0) throw TruncationError("compose: infinite expansion needs a target floor");
  result.floor_ = floor;

  auto accumulate = [&](int j, const LaurentSeries& power) {
    auto it = terms_.find(j);
    if (it == terms_.end()) return;
    for (const auto& [e, v] : power.terms_) {
      if (floor != kExact && e < floor) continue;
      auto slot = result.terms_.try_emplace(e, zero_coeff()).first;
      slot->second += it->second * v;
    }
  };
  LaurentSeries one(inner.var_, coeffs_, *field_);
  one.terms_.emplace(0, MultiPoly::constant(coeffs_, *field_, Rational(1)));
  LaurentSeries power = one;
  for (int j = 0; j <= lead; ++j) {
    if (j > 0) power = multiply(power, inner, floor);
    accumulate(j, power);
  }
  if (low < 0) {
    const LaurentSeries inv = inner.invert(floor);
    power = one;
    // inner^j has leading exponent j, so only j >= floor can contribute.
    for (int j = -1; j >= std::max(low, floor); --j) {
      power = multiply(power, inv, floor);
      accumulate(j, power);
    }
  }
  std::erase_if(result.terms_, [](const auto& kv) { return kv.second.is_zero(); });
  return result;
}

LaurentSeries LaurentSeries::revert(std::string new_var, int target_floor) const {
  const auto lead = leading_exponent();
  if (!lead || *lead != 1) throw PolynomialError("revert: series must lead with x");
  const auto c = terms_.at(1).constant_value();
  if (!c || !c->is_one()) throw PolynomialError("revert: leading coefficient must be 1");
  if (!coefficient(0).is_zero()) throw PolynomialError("revert: constant term must vanish");

  const int floor = max_floor(floor_, target_floor);
  LaurentSeries k(new_var, coeffs_, *field_, floor);
  k.terms_.emplace(1, MultiPoly::constant(coeffs_, *field_, Rational(1)));
  if (terms_.size() == 1) return k;
  if (floor == kExact) throw TruncationError("revert: infinite expansion needs a target floor");

  // Fixed point of x = k - g(x), with g the part of exponent <= -1. Each
  // round fixes at least one more coefficient.
  LaurentSeries g = *this;
  g.terms_.erase(1);
  LaurentSeries x = k;
  for (int iter = 0; iter < 3 - floor; ++iter) {
    LaurentSeries next = k - g.compose(x, floor);
    next = next.truncated(floor);
    if (next.terms_ == x.terms_) return next;
    x = std::move(next);
  }
  throw TruncationError("revert: fixed-point iteration did not settle");
}

bool LaurentSeries::agrees_from(const LaurentSeries& other, int floor) const {
  check_compatible(other, "compare");
  if ((!is_exact() && floor < floor_) || (!other.is_exact() && floor < other.floor_)) {
    throw TruncationError("compare: requested window lies below a tracked floor");
  }
  auto a = terms_.lower_bound(floor);
  auto b = other.terms_.lower_bound(floor);
  return std::equal(a, terms_.end(), b, other.terms_.end());
}

std::string LaurentSeries::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) out << " + ";
    out << "(" << it->second.to_string() << ")";
    if (it->first != 0) out << "*" << var_ << "^" << it->first;
    first = false;
  }
  if (first) out << "0";
  if (!is_exact()) out << " + O(" << var_ << "^" << (floor_ - 1) << ")";
  return out.str();
}

namespace {

LaurentSeries monic_series(const MultiPoly& w, std::string_view var, int r) {
  LaurentSeries s = LaurentSeries::from_polynomial(w, var);
  auto lead = s.leading_exponent();
  if (!lead || *lead != r) throw PolynomialError("monic_root: polynomial does not have degree r");
  auto c = s.terms().at(r).constant_value();
  if (!c || !c->is_one()) throw PolynomialError("monic_root: polynomial is not monic");
  return s;
}

}  // namespace

LaurentSeries monic_root(const MultiPoly& w, std::string_view var, int r, int floor) {
  return monic_series(w, var, r).pow_rational(Rational(1, r), floor);
}

LaurentSeries fractional_power(const MultiPoly& w, std::string_view var, int alpha, int r, int floor) {
  if (alpha < 0) throw PolynomialError("fractional_power: exponent must be non-negative");
  return monic_series(w, var, r).pow_rational(frac(alpha, r), floor);
}

}  // namespace rspin

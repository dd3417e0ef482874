#include "rspin/scalar.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include <mpfr.h>

namespace rspin {

Rational parse_rational(std::string_view text) {
  Rational q;
  if (text.empty() || q.set_str(std::string(text), 10) != 0) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

Rational binomial(const Rational& a, int j) {
  Rational result(1);
  for (int i = 0; i < j; ++i) {
    result *= (a - i);
    result /= (i + 1);
  }
  return result;
}

namespace {

// Dense Q[x] helpers, constant term first, trailing zeros trimmed.
using Dense = std::vector<Rational>;

void trim(Dense& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

// Returns (quotient, remainder) of a / b, b nonzero.
std::pair<Dense, Dense> divmod(Dense a, const Dense& b) {
  trim(a);
  Dense q;
  const int db = static_cast<int>(b.size()) - 1;
  if (static_cast<int>(a.size()) - 1 >= db) q.assign(a.size() - static_cast<std::size_t>(db), Rational(0));
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    if (sgn(a[i]) == 0) continue;
    Rational c = a[i] / b[db];
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  trim(a);
  trim(q);
  return {q, a};
}

Dense mul(const Dense& a, const Dense& b) {
  if (a.empty() || b.empty()) return {};
  Dense c(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  trim(c);
  return c;
}

Dense sub(Dense a, const Dense& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// Reduce in place modulo a monic modulus of degree n; result has length n.
void reduce_monic(Dense& a, const Dense& modulus) {
  const int n = static_cast<int>(modulus.size()) - 1;
  for (int i = static_cast<int>(a.size()) - 1; i >= n; --i) {
    if (sgn(a[i]) == 0) continue;
    Rational c = a[i];
    for (int j = 0; j < n; ++j) a[i - n + j] -= c * modulus[j];
    a[i] = 0;
  }
  a.resize(static_cast<std::size_t>(n), Rational(0));
}

}  // namespace

std::vector<Rational> cyclotomic_polynomial(int m) {
  if (m < 1) throw std::invalid_argument("cyclotomic order must be positive");
  Dense num(static_cast<std::size_t>(m) + 1, Rational(0));
  num[0] = -1;
  num[m] = 1;
  for (int d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    auto [q, rem] = divmod(num, cyclotomic_polynomial(d));
    if (!rem.empty()) throw std::logic_error("cyclotomic division left a remainder");
    num = std::move(q);
  }
  return num;
}

CyclotomicField::CyclotomicField(int order) : order_(order), modulus_(cyclotomic_polynomial(order)) {
  powers_.reserve(static_cast<std::size_t>(order));
  const int n = degree();
  for (int k = 0; k < order; ++k) {
    Dense p(static_cast<std::size_t>(k) + 1, Rational(0));
    p[k] = 1;
    reduce_monic(p, modulus_);
    p.resize(static_cast<std::size_t>(n), Rational(0));
    powers_.push_back(std::move(p));
  }
}

const CyclotomicField& CyclotomicField::get(int order) {
  if (order < 1) throw std::invalid_argument("cyclotomic order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<CyclotomicField>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot.reset(new CyclotomicField(order));
  return *slot;
}

const std::vector<Rational>& CyclotomicField::zeta_power(int k) const {
  k %= order_;
  if (k < 0) k += order_;
  return powers_[static_cast<std::size_t>(k)];
}

Cyclotomic::Cyclotomic(const CyclotomicField& field, const Rational& value)
    : field_(&field), coords_(static_cast<std::size_t>(field.degree()), Rational(0)) {
  coords_[0] = value;
}

Cyclotomic::Cyclotomic(const CyclotomicField& field, std::vector<Rational> coords) : field_(&field) {
  reduce_monic(coords, field.modulus());
  coords_ = std::move(coords);
}

Cyclotomic Cyclotomic::zeta(const CyclotomicField& field, int k) { return {field, field.zeta_power(k)}; }

bool Cyclotomic::is_zero() const {
  for (const auto& c : coords_)
    if (sgn(c) != 0) return false;
  return true;
}

bool Cyclotomic::is_rational() const {
  for (std::size_t i = 1; i < coords_.size(); ++i)
    if (sgn(coords_[i]) != 0) return false;
  return true;
}

bool Cyclotomic::is_one() const { return is_rational() && coords_[0] == 1; }

const Rational& Cyclotomic::rational() const {
  if (!is_rational()) throw ArithmeticError("cyclotomic element is not rational: " + to_string());
  return coords_[0];
}

std::optional<std::pair<Rational, int>> Cyclotomic::as_monomial() const {
  if (is_zero()) return std::nullopt;
  for (int k = 0; k < order(); ++k) {
    const auto& z = field_->zeta_power(k);
    // Find the scale from the first nonzero coordinate of zeta^k.
    std::size_t lead = 0;
    while (sgn(z[lead]) == 0) ++lead;
    Rational c = coords_[lead] / z[lead];
    if (sgn(c) == 0) continue;
    bool match = true;
    for (std::size_t i = 0; i < coords_.size() && match; ++i) match = (coords_[i] == c * z[i]);
    if (match) return std::make_pair(c, k);
  }
  return std::nullopt;
}

void Cyclotomic::check_same_field(const Cyclotomic& b, const char* op) const {
  if (field_ != b.field_) {
    throw ArithmeticError(std::string("cyclotomic ") + op + ": order mismatch (" + std::to_string(order()) +
                          " vs " + std::to_string(b.order()) + ")");
  }
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& b) {
  check_same_field(b, "add");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += b.coords_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& b) {
  check_same_field(b, "sub");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= b.coords_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Rational& b) {
  for (auto& c : coords_) c *= b;
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& b) {
  check_same_field(b, "mul");
  if (b.is_rational()) return *this *= b.coords_[0];
  if (is_rational()) {
    Rational c = coords_[0];
    coords_ = b.coords_;
    return *this *= c;
  }
  const std::size_t n = coords_.size();
  Dense prod(2 * n - 1, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(coords_[i]) == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(b.coords_[j]) == 0) continue;
      prod[i + j] += coords_[i] * b.coords_[j];
    }
  }
  reduce_monic(prod, field_->modulus());
  coords_ = std::move(prod);
  return *this;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  a.check_same_field(b, "compare");
  return a.coords_ == b.coords_;
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw ArithmeticError("division by zero in Q(zeta_" + std::to_string(order()) + ")");
  if (is_rational()) return {*field_, Rational(1) / coords_[0]};
  // Extended Euclid: track s with s * a == r (mod Phi_m).
  Dense r0 = field_->modulus(), r1 = coords_;
  trim(r1);
  Dense s0, s1{Rational(1)};
  while (r1.size() > 1) {
    auto [q, rem] = divmod(r0, r1);
    Dense s2 = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r1 is a nonzero constant because Phi_m is irreducible.
  Rational c = Rational(1) / r1[0];
  for (auto& v : s1) v *= c;
  return {*field_, s1};
}

Cyclotomic Cyclotomic::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Cyclotomic result = one(*field_), base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::complex<double> Cyclotomic::to_complex() const {
  std::complex<double> z(0.0, 0.0);
  const double step = 2.0 * std::numbers::pi / order();
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (sgn(coords_[k]) == 0) continue;
    z += coords_[k].get_d() * std::polar(1.0, step * static_cast<double>(k));
  }
  return z;
}

std::pair<std::string, std::string> Cyclotomic::numeric_eval(int digits) const {
  if (digits < 1) digits = 1;
  const auto bits = static_cast<mpfr_prec_t>(digits * 3.33 + 64);
  mpfr_t re, im, angle, c, s, term;
  mpfr_inits2(bits, re, im, angle, c, s, term, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(re, 1);
  mpfr_set_zero(im, 1);
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (sgn(coords_[k]) == 0) continue;
    mpfr_const_pi(angle, MPFR_RNDN);
    mpfr_mul_ui(angle, angle, 2 * static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_div_ui(angle, angle, static_cast<unsigned long>(order()), MPFR_RNDN);
    mpfr_sin_cos(s, c, angle, MPFR_RNDN);
    mpfr_mul_q(term, c, coords_[k].get_mpq_t(), MPFR_RNDN);
    mpfr_add(re, re, term, MPFR_RNDN);
    mpfr_mul_q(term, s, coords_[k].get_mpq_t(), MPFR_RNDN);
    mpfr_add(im, im, term, MPFR_RNDN);
  }
  auto render = [digits](mpfr_t v) {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rf", digits, v);
    std::string out(buf);
    mpfr_free_str(buf);
    if (out.rfind("-0.", 0) == 0 && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
  };
  std::pair<std::string, std::string> out{render(re), render(im)};
  mpfr_clears(re, im, angle, c, s, term, static_cast<mpfr_ptr>(nullptr));
  return out;
}

std::string Cyclotomic::to_string(std::string_view symbol) const {
  if (is_rational()) return coords_[0].get_str();
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    const Rational& c = coords_[k];
    if (sgn(c) == 0) continue;
    Rational mag = abs(c);
    if (!first) out << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) out << "-";
    if (k == 0) {
      out << mag.get_str();
    } else {
      if (mag != 1) out << mag.get_str() << "*";
      out << symbol;
      if (k > 1) out << "^" << k;
    }
    first = false;
  }
  return out.str();
}

}  // namespace rspin

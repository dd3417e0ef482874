#pragma once

#include <string>
#include <vector>

#include "rspin/multipoly.hpp"

namespace rspin::testing {

// Small polynomial-building kit for tests.
struct Ring {
  RegistryPtr reg;
  const CyclotomicField* field;

  Ring(std::vector<std::string> names, std::vector<Rational> weights, int order = 1)
      : reg(make_registry(std::move(names), std::move(weights))), field(&CyclotomicField::get(order)) {}
  explicit Ring(std::vector<std::string> names, int order = 1)
      : Ring(names, std::vector<Rational>(names.size(), Rational(1)), order) {}

  MultiPoly v(const std::string& name) const { return MultiPoly::variable(reg, *field, name); }
  MultiPoly c(const Rational& q) const { return MultiPoly::constant(reg, *field, q); }
  MultiPoly c(long p, long q) const { return c(frac(p, q)); }
  MultiPoly zero() const { return MultiPoly(reg, *field); }
  Cyclotomic zeta(int k = 1) const { return Cyclotomic::zeta(*field, k); }
  Cyclotomic q(long p, long d = 1) const { return Cyclotomic(*field, frac(p, d)); }
};

}  // namespace rspin::testing

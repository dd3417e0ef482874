#include "rspin/serialize.hpp"

#include <stdexcept>

namespace rspin {

Json to_json(const Rational& q) { return q.get_str(); }

Json to_json(const Cyclotomic& c) {
  Json coords = Json::array();
  for (const auto& q : c.coords()) coords.push_back(q.get_str());
  return {{"order", c.order()}, {"coords", std::move(coords)}};
}

Json to_json(const MultiPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exps", e}, {"coeff", to_json(c)}});
  return {{"vars", p.vars().names()}, {"terms", std::move(terms)}};
}

Json to_json(const LaurentSeries& s) {
  Json terms = Json::array();
  for (const auto& [e, c] : s.terms()) terms.push_back({{"exp", e}, {"coeff", to_json(c)}});
  Json out = {{"var", s.var()}, {"terms", std::move(terms)}};
  out["floor"] = s.is_exact() ? Json(nullptr) : Json(s.floor());
  return out;
}

Json to_json(const CaseResult& c) {
  Json out = {{"indices", c.indices}, {"pass", c.pass}};
  out["residual"] = c.residual ? to_json(*c.residual) : Json(nullptr);
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

Json to_json(const VerificationReport& r) {
  Json cases = Json::array();
  for (const auto& c : r.cases) cases.push_back(to_json(c));
  Json out = {{"identity", r.identity}, {"cases", std::move(cases)}};
  out["r"] = r.r ? Json(*r.r) : Json(nullptr);
  if (r.singularity) out["singularity"] = *r.singularity;
  if (!r.metadata.empty()) out["metadata"] = r.metadata;
  return out;
}

Cyclotomic cyclotomic_from_json(const Json& j) {
  const auto& field = CyclotomicField::get(j.at("order").get<int>());
  std::vector<Rational> coords;
  for (const auto& c : j.at("coords")) coords.push_back(parse_rational(c.get<std::string>()));
  if (static_cast<int>(coords.size()) != field.degree()) throw std::invalid_argument("scalar JSON: wrong coordinate count");
  return Cyclotomic(field, std::move(coords));
}

MultiPoly poly_from_json(const Json& j, const RegistryPtr& registry) {
  auto names = j.at("vars").get<std::vector<std::string>>();
  RegistryPtr reg = registry;
  if (!reg || reg->names() != names) {
    reg = make_registry(names, std::vector<Rational>(names.size(), Rational(1)));
  }
  const auto& terms = j.at("terms");
  const CyclotomicField* field = nullptr;
  std::optional<MultiPoly> p;
  for (const auto& t : terms) {
    Cyclotomic c = cyclotomic_from_json(t.at("coeff"));
    if (!p) {
      field = &c.field();
      p.emplace(reg, *field);
    }
    auto e = t.at("exps").get<Exponents>();
    if (e.size() != names.size()) throw std::invalid_argument("polynomial JSON: exponent vector has wrong length");
    p->add_term(e, c);
  }
  if (!p) return MultiPoly(reg, CyclotomicField::get(1));
  return *p;
}

VerificationReport report_from_json(const Json& j) {
  VerificationReport r;
  r.identity = j.at("identity").get<std::string>();
  if (!j.at("r").is_null()) r.r = j.at("r").get<int>();
  if (j.contains("singularity")) r.singularity = j.at("singularity").get<std::string>();
  if (j.contains("metadata")) r.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
  for (const auto& c : j.at("cases")) {
    CaseResult cr;
    cr.indices = c.at("indices").get<std::vector<int>>();
    cr.pass = c.at("pass").get<bool>();
    if (!c.at("residual").is_null()) cr.residual = poly_from_json(c.at("residual"));
    if (c.contains("note")) cr.note = c.at("note").get<std::string>();
    r.cases.push_back(std::move(cr));
  }
  return r;
}

}  // namespace rspin

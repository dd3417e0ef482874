#pragma once

// Canonical JSON forms:
//   scalar     {"order": m, "coords": ["p/q", ...]}
//   polynomial {"vars": [...], "terms": [{"exps": [...], "coeff": <scalar>}]}, terms by ascending exponents
//   report     {"identity", "r", "cases": [{"indices", "pass", "residual"}]} (+ "singularity", "metadata")

#include <nlohmann/json.hpp>

#include "rspin/laurent.hpp"
#include "rspin/report.hpp"

namespace rspin {

using Json = nlohmann::json;

Json to_json(const Rational& q);
Json to_json(const Cyclotomic& c);
Json to_json(const MultiPoly& p);
Json to_json(const LaurentSeries& s);
Json to_json(const CaseResult& c);
Json to_json(const VerificationReport& r);

Cyclotomic cyclotomic_from_json(const Json& j);
/// Attaches to `registry` when its names match the "vars" list; otherwise
/// builds a registry with unit weights.
MultiPoly poly_from_json(const Json& j, const RegistryPtr& registry = nullptr);
VerificationReport report_from_json(const Json& j);

}  // namespace rspin

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "rspin/amodel.hpp"
#include "rspin/d4.hpp"
#include "rspin/serialize.hpp"

namespace rspin::cli {

namespace {

constexpr int kDefaultMaxR = 8;

const std::vector<std::string> kAIdentities = {"main",         "v-coordinates",  "flat-metric", "bootstrap",
                                               "wdvv-type",    "residue-metric", "multiplication",
                                               "one-point",    "extended-bootstrap"};
const std::vector<std::string> kD4Identities = {"w33-bootstrap", "w33-metric", "d4-flat", "d4-extended", "d4-transpose"};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string model = "rspin";
  std::optional<std::string> r_text;
  std::string format = "human";
  std::uint64_t seed = 0;
  int degree_bound = 4;
  bool experimental = false;
  bool all = false;
  std::vector<std::string> identities;
};

int max_r() {
  const char* env = std::getenv("RSPIN_MAX_R");
  if (env == nullptr || *env == '\0') return kDefaultMaxR;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(env, &pos);
    if (pos != std::string(env).size() || v < 2) throw UsageError("");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("RSPIN_MAX_R must be an integer >= 2, got '") + env + "'");
  }
}

int parse_int(const std::string& text) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(text, &pos);
  } catch (const std::exception&) {
    throw UsageError("bad r value '" + text + "'");
  }
  if (pos != text.size()) throw UsageError("bad r value '" + text + "'");
  return v;
}

/// "N" or "A..B", each within 2..max_r().
std::vector<int> parse_r(const std::string& text) {
  int lo = 0, hi = 0;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    lo = hi = parse_int(text);
  } else {
    lo = parse_int(text.substr(0, dots));
    hi = parse_int(text.substr(dots + 2));
  }
  const int cap = max_r();
  if (lo > hi) throw UsageError("empty r range '" + text + "'");
  if (lo < 2 || hi > cap) {
    throw UsageError("r must lie in 2.." + std::to_string(cap) + " (set RSPIN_MAX_R to raise the cap), got '" + text + "'");
  }
  std::vector<int> out;
  for (int r = lo; r <= hi; ++r) out.push_back(r);
  return out;
}

std::vector<int> r_values(const RunConfig& c, const std::string& fallback) {
  if (c.r_text) return parse_r(*c.r_text);
  if (fallback.empty()) throw UsageError("-r is required for this command");
  return parse_r(fallback);
}

// Human rendering of scalars: theta powers where possible, with a float.
std::string human_scalar(const Cyclotomic& c) {
  if (c.is_rational()) return to_string(c.rational());
  std::string symbolic;
  if (const auto m = c.as_monomial()) {
    const auto& [q, k] = *m;
    if (q == -1) symbolic = "-";
    else if (q != 1) symbolic = to_string(q) + "*";
    symbolic += k == 1 ? "θ" : "θ^" + std::to_string(k);
  } else {
    symbolic = c.to_string("θ");
  }
  const auto [re, im] = c.numeric_eval(6);
  std::string numeric = re;
  if (im != "0.000000") numeric += (im[0] == '-' ? "" : "+") + im + "i";
  return symbolic + " ≈ " + numeric;
}

std::string human_poly(const MultiPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += p.vars().name(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (c.is_rational()) {
      Rational q = c.rational();
      const bool negative = sgn(q) < 0;
      q = abs(q);
      out << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
      if (mono.empty() || q != 1) out << to_string(q) << (mono.empty() ? "" : "*");
    } else {
      out << (first ? "" : " + ") << "(" << human_scalar(c) << ")" << (mono.empty() ? "" : "*");
    }
    out << mono;
    first = false;
  }
  return out.str();
}

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

// ---------------------------------------------------------------- potential

int cmd_potential(const RunConfig& c, std::ostream& out) {
  Json results = Json::array();
  auto human_header = [&](const std::string& label) {
    if (c.format == "human") out << label << "\n";
  };
  if (c.model == "w33") {
    D4Session d;
    const auto f = w33_bootstrap(d);
    if (c.format == "json") {
      emit_json(out, Json{{"model", "w33"}, {"potential", to_json(f)}});
    } else {
      out << "F = " << human_poly(f) << "\n";
    }
    return kPass;
  }
  const auto rs = r_values(c, "");
  ExtendedBootstrapOptions opts;
  opts.max_r = max_r();
  for (int r : rs) {
    ASession s(r);
    Json entry{{"model", c.model}, {"r", r}};
    human_header("r = " + std::to_string(r));
    if (c.model == "rspin") {
      const auto f = wdvv_bootstrap(s).potential;
      entry["potential"] = to_json(f);
      if (c.format == "human") out << "F = " << human_poly(f) << "\n";
    } else {
      const auto p = extended_pipeline(s, c.experimental, opts);
      entry["route"] = p.route;
      entry["potential"] = to_json(p.fext);
      if (c.format == "human") {
        out << "route: " << p.route << "\n";
        out << "F^ext = " << human_poly(p.fext) << "\n";
      }
    }
    results.push_back(std::move(entry));
  }
  if (c.format == "json") emit_json(out, rs.size() == 1 ? results[0] : results);
  return kPass;
}

// ---------------------------------------------------------------- flat

int cmd_flat(const RunConfig& c, std::ostream& out) {
  const auto rs = r_values(c, "");
  Json results = Json::array();
  for (int r : rs) {
    ASession s(r);
    Json entry{{"r", r}, {"T", Json::array()}, {"v", Json::array()}, {"s_of_t", Json::array()}};
    if (c.format == "human") out << "r = " << r << "\n";
    for (int a = 1; a <= r - 1; ++a) {
      const auto& p = s.flat_coordinates()[a - 1];
      entry["T"].push_back(to_json(p));
      if (c.format == "human") out << "T" << a << " = " << human_poly(p) << "\n";
    }
    for (int a = 1; a <= r - 1; ++a) {
      const auto& p = s.v_coordinates()[a - 1];
      entry["v"].push_back(to_json(p));
      if (c.format == "human") out << "v" << a << " = " << human_poly(p) << "\n";
    }
    for (int i = 0; i <= r - 2; ++i) {
      const auto& p = s.s_of_t()[i];
      entry["s_of_t"].push_back(to_json(p));
      if (c.format == "human") out << ASession::s_name(i) << "(t) = " << human_poly(p) << "\n";
    }
    results.push_back(std::move(entry));
  }
  if (c.format == "json") emit_json(out, rs.size() == 1 ? results[0] : results);
  return kPass;
}

// ---------------------------------------------------------------- verify

struct Selection {
  std::set<std::string> a_model;
  std::set<std::string> d4;
};

Selection select(const RunConfig& c) {
  Selection sel;
  auto add_all_a = [&] {
    for (const auto& id : kAIdentities) {
      if (id != "extended-bootstrap" || c.experimental) sel.a_model.insert(id);
    }
  };
  if (c.identities.empty()) {
    if (!c.all) throw UsageError("name an identity or pass --all");
    add_all_a();
    sel.d4.insert(kD4Identities.begin(), kD4Identities.end());
    return sel;
  }
  for (const auto& id : c.identities) {
    if (id == "d4") {
      sel.d4.insert(kD4Identities.begin(), kD4Identities.end());
    } else if (id == "a") {
      add_all_a();
    } else if (std::find(kAIdentities.begin(), kAIdentities.end(), id) != kAIdentities.end()) {
      if (id == "extended-bootstrap" && !c.experimental) throw UsageError("extended-bootstrap needs --experimental");
      sel.a_model.insert(id);
    } else if (std::find(kD4Identities.begin(), kD4Identities.end(), id) != kD4Identities.end()) {
      sel.d4.insert(id);
    } else {
      throw UsageError("unknown identity '" + id + "'");
    }
  }
  return sel;
}

std::vector<VerificationReport> run_a_model(const std::set<std::string>& ids, int r, const RunConfig& c) {
  ASession s(r);
  ExtendedBootstrapOptions opts;
  opts.max_r = max_r();
  std::vector<VerificationReport> out;
  const auto pipeline = extended_pipeline(s, c.experimental, opts);
  for (const auto& id : ids) {
    if (id == "main") out.push_back(verify_extended_identity(s, pipeline.fext, pipeline.route));
    if (id == "v-coordinates") out.push_back(verify_v_coordinates(s));
    if (id == "flat-metric") out.push_back(verify_flat_metric(s));
    if (id == "bootstrap") out.push_back(verify_rspin_bootstrap(s, pipeline.frs));
    if (id == "wdvv-type") out.push_back(verify_wdvv_type(s, pipeline.frs, pipeline.fext));
    if (id == "residue-metric") out.push_back(verify_residue_metric(s, pipeline.fext));
    if (id == "multiplication") out.push_back(verify_multiplication(s, pipeline.frs, pipeline.fext));
    if (id == "one-point") out.push_back(verify_one_point(s, pipeline.fext));
    if (id == "extended-bootstrap") {
      const auto fext = reconstruct_full_fext(s, pipeline.frs, extended_from_bmodel(s));
      out.push_back(verify_extended_bootstrap(s, pipeline.frs, fext, opts));
    }
  }
  return out;
}

std::vector<VerificationReport> run_d4(const std::set<std::string>& ids, const RunConfig& c) {
  D4Session d;
  std::vector<VerificationReport> out;
  std::optional<InterpolatedMetric> metric;
  auto g = [&]() -> const InterpolatedMetric& {
    if (!metric) metric = saito_metric_w33(d, c.seed, c.degree_bound);
    return *metric;
  };
  for (const auto& id : ids) {
    if (id == "w33-bootstrap") out.push_back(verify_w33_bootstrap(d));
    if (id == "w33-metric") out.push_back(verify_w33_metric(d, g()));
    if (id == "d4-flat") out.push_back(verify_d4_flat_change(d, g(), w33_bootstrap(d)));
    if (id == "d4-extended") out.push_back(verify_d4_extended(d));
    if (id == "d4-transpose") out.push_back(compare_d4_transpose(d, w33_bootstrap(d)));
  }
  return out;
}

void print_human(std::ostream& out, const VerificationReport& rep) {
  out << (rep.passed() ? "PASS " : "FAIL ") << rep.identity;
  if (rep.r) out << " r=" << *rep.r;
  if (rep.singularity) out << " " << *rep.singularity;
  out << " (" << rep.cases.size() << " cases";
  if (!rep.passed()) out << ", " << rep.failures() << " failed";
  out << ")\n";
  for (const auto& [k, v] : rep.metadata) out << "  " << k << ": " << v << "\n";
  for (const auto& cs : rep.cases) {
    if (cs.pass) continue;
    out << "  case [";
    for (std::size_t i = 0; i < cs.indices.size(); ++i) out << (i ? "," : "") << cs.indices[i];
    out << "]";
    if (!cs.note.empty()) out << " " << cs.note;
    if (cs.residual) out << ": residual " << human_poly(*cs.residual);
    out << "\n";
  }
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const auto sel = select(c);
  std::vector<int> rs;
  if (!sel.a_model.empty()) rs = r_values(c, "2..6");
  std::vector<VerificationReport> reports;
  for (int r : rs) {
    for (auto& rep : run_a_model(sel.a_model, r, c)) reports.push_back(std::move(rep));
  }
  if (!sel.d4.empty()) {
    for (auto& rep : run_d4(sel.d4, c)) reports.push_back(std::move(rep));
  }
  for (auto& rep : reports) rep.sort_cases();
  std::stable_sort(reports.begin(), reports.end(), [](const VerificationReport& a, const VerificationReport& b) {
    return std::make_tuple(a.singularity.value_or(""), a.identity, a.r.value_or(0)) <
           std::make_tuple(b.singularity.value_or(""), b.identity, b.r.value_or(0));
  });
  bool ok = true;
  for (const auto& rep : reports) ok = ok && rep.passed();
  const bool note_conjectures = c.all && !sel.d4.empty();
  const std::string conjecture_note = "E6, E8: conjecture, not verified by this artifact";
  if (c.format == "json") {
    Json j{{"passed", ok}, {"reports", Json::array()}};
    for (const auto& rep : reports) j["reports"].push_back(to_json(rep));
    if (note_conjectures) j["notes"] = Json::array({conjecture_note});
    emit_json(out, j);
  } else {
    for (const auto& rep : reports) print_human(out, rep);
    if (note_conjectures) out << "NOTE " << conjecture_note << "\n";
    out << (ok ? "all identities pass" : "some identities FAIL") << " (" << reports.size() << " reports)\n";
  }
  return ok ? kPass : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Exact verification of r-spin and D4 mirror identities", "rspin"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-r", c.r_text, "N or A..B");
    sub->add_option("--format", c.format, "human or json")->check(CLI::IsMember({"human", "json"}));
  };
  auto* potential = app.add_subcommand("potential", "Print a generating potential");
  add_common(potential);
  potential->add_option("--model", c.model, "rspin, ext or w33")->check(CLI::IsMember({"rspin", "ext", "w33"}));
  potential->add_flag("--experimental", c.experimental, "Bootstrap F^ext from the WDVV-type equations");

  auto* verify = app.add_subcommand("verify", "Verify identities exactly");
  add_common(verify);
  verify->add_option("identities", c.identities, "Identities, 'a' for every A-model identity, 'd4' for the D4 suite");
  verify->add_flag("--all", c.all, "Run the full battery");
  verify->add_option("--seed", c.seed, "Seed of the D4 sample points");
  verify->add_option("--degree-bound", c.degree_bound, "Degree bound of the D4 metric interpolation")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--experimental", c.experimental, "Enable the extended bootstrap");

  auto* flat = app.add_subcommand("flat", "Print flat coordinates T^a(s), v_a(s) and s_i(t)");
  add_common(flat);

  std::vector<std::string> storage{"rspin"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }
  try {
    if (potential->parsed()) return cmd_potential(c, out);
    if (verify->parsed()) return cmd_verify(c, out);
    if (flat->parsed()) return cmd_flat(c, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BootstrapError& e) {
    err << "bootstrap failed: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace rspin::cli

#include "tdscalc/json_io.hpp"

namespace tdsc {

namespace {

const BigInt kMaxJsonInt = BigInt("9007199254740991");  // 2^53 - 1

[[noreturn]] void schema_fail(const std::string& what) {
  throw CalcError(ErrorKind::Schema, what);
}

json require(const json& j, const char* key) {
  if (!j.contains(key)) schema_fail(std::string("missing key '") + key + "'");
  return j.at(key);
}

}  // namespace

json rational_part_to_json(const BigInt& v) {
  if (v <= kMaxJsonInt && v >= -kMaxJsonInt) return json(v.convert_to<long long>());
  return json(v.str());
}

json rational_to_json(const Rational& r) {
  return json{{"num", rational_part_to_json(numerator(r))},
              {"den", rational_part_to_json(denominator(r))}};
}

namespace {

BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long long>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  schema_fail("expected integer or integer string");
}

}  // namespace

Rational rational_from_json(const json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    if (j.is_object()) {
      BigInt num = bigint_from_json(require(j, "num"));
      BigInt den = bigint_from_json(require(j, "den"));
      if (den == 0) schema_fail("zero denominator");
      return Rational(num, den);
    }
  } catch (const CalcError&) {
    throw;
  } catch (const std::exception& e) {
    schema_fail(std::string("bad rational: ") + e.what());
  }
  schema_fail("expected a rational (number, string, or {num, den})");
}

json vec_to_json(const RatVec& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back(rational_to_string(x));
  return arr;
}

RatVec vec_from_json(const json& j) {
  if (!j.is_array()) schema_fail("expected an array of rationals");
  RatVec out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

json poly_to_json(const PolyExpr& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) {
    terms.push_back(json{{"exp", e},
                         {"num", rational_part_to_json(numerator(c))},
                         {"den", rational_part_to_json(denominator(c))}});
  }
  return json{{"vars", p.num_vars()}, {"terms", terms}};
}

PolyExpr poly_from_json(const json& j) {
  int vars = require(j, "vars").get<int>();
  PolyExpr p(vars);
  for (const auto& t : require(j, "terms")) {
    std::vector<int> e = require(t, "exp").get<std::vector<int>>();
    Rational c(bigint_from_json(require(t, "num")), bigint_from_json(require(t, "den")));
    p.add_term(e, c);
  }
  return p;
}

json exterior_to_json(const ExteriorForm& f) {
  json coeffs = json::array();
  for (const auto& [i, c] : f.coeffs()) {
    coeffs.push_back(json{{"idx", i.idx},
                          {"num", rational_part_to_json(numerator(c))},
                          {"den", rational_part_to_json(denominator(c))}});
  }
  return json{{"dim", f.dim()}, {"degree", f.degree()}, {"coeffs", coeffs}};
}

ExteriorForm exterior_from_json(const json& j) {
  ExteriorForm f(require(j, "dim").get<int>(), require(j, "degree").get<int>());
  for (const auto& c : require(j, "coeffs")) {
    MultiIndex idx(require(c, "idx").get<std::vector<int>>());
    Rational v(bigint_from_json(require(c, "num")), bigint_from_json(require(c, "den")));
    f.add_coeff(idx, v);
  }
  return f;
}

json box_to_json(const Box& b) {
  if (!b.bounded) return json{{"dim", b.dim}, {"unbounded", true}};
  return json{{"lo", vec_to_json(b.lo)}, {"hi", vec_to_json(b.hi)}};
}

Box box_from_json(const json& j) {
  if (j.contains("unbounded") && j.at("unbounded").get<bool>())
    return Box::whole(require(j, "dim").get<int>());
  return Box::bounds(vec_from_json(require(j, "lo")), vec_from_json(require(j, "hi")));
}

json diff_form_to_json(const DifferentialForm& f) {
  json coeffs = json::array();
  for (const auto& [i, c] : f.coeffs())
    coeffs.push_back(json{{"idx", i.idx}, {"expr", c.to_string()}});
  return json{{"domain", box_to_json(f.domain())}, {"degree", f.degree()}, {"coeffs", coeffs}};
}

DifferentialForm diff_form_from_json(const json& j) {
  Box domain = box_from_json(require(j, "domain"));
  DifferentialForm f(domain, require(j, "degree").get<int>());
  for (const auto& c : require(j, "coeffs")) {
    MultiIndex idx(require(c, "idx").get<std::vector<int>>());
    f.add_coeff(idx, parse_poly(require(c, "expr").get<std::string>(), domain.dim));
  }
  return f;
}

json smooth_map_to_json(const SmoothMap& m) {
  if (!m.is_polynomial())
    return json{{"domain", box_to_json(m.domain())},
                {"blackbox", m.blackbox().name},
                {"target_dim", m.target_dim()}};
  json comps = json::array();
  for (const auto& c : m.components()) comps.push_back(c.to_string());
  return json{{"domain", box_to_json(m.domain())}, {"components", comps}};
}

SmoothMap smooth_map_from_json(const json& j) {
  if (j.contains("blackbox"))
    schema_fail("black-box maps cannot be reconstructed from JSON");
  Box domain = box_from_json(require(j, "domain"));
  std::vector<PolyExpr> comps;
  for (const auto& c : require(j, "components"))
    comps.push_back(parse_poly(c.get<std::string>(), domain.dim));
  return SmoothMap(domain, std::move(comps));
}

json space_to_json(const DiffSpace& x) {
  json gens = json::array();
  for (const auto& g : x.generators) gens.push_back(g.to_string());
  std::string kind = x.name;
  if (auto pos = kind.find(':'); pos != std::string::npos) kind = kind.substr(0, pos);
  return json{{"ambient", x.ambient_dim},
              {"kind", kind},
              {"name", x.name},
              {"generators", gens},
              {"has_transverse_points", x.has_transverse_points}};
}

DiffSpace space_from_json(const json& j) {
  if (j.is_string()) return space_by_name(j.get<std::string>());
  std::string kind = require(j, "kind").get<std::string>();
  if (kind == "euclidean") {
    int n = j.contains("ambient") ? j.at("ambient").get<int>() : 2;
    return make_euclidean(n);
  }
  if (j.contains("name")) return space_by_name(j.at("name").get<std::string>());
  return space_by_name(kind);
}

json probe_result_to_json(const ProbeResult& r) {
  json out{{"found", r.found}, {"strategy", r.strategy}};
  if (r.witness) out["witness"] = smooth_map_to_json(*r.witness);
  if (r.obstruction)
    out["certificate"] = json{{"kind", r.obstruction->kind}, {"detail", r.obstruction->detail}};
  return out;
}

json check_report_to_json(const CheckReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    json e{{"id", c.id}, {"status", c.pass ? "pass" : "fail"}};
    if (!c.witness.empty()) e["witness"] = c.witness;
    cases.push_back(e);
  }
  return json{{"check", r.name}, {"pass", r.pass}, {"cases", cases}};
}

json plaque_indexed_to_json(const PlaqueIndexedForm& omega,
                            std::span<const SmoothMap> generator_plaques) {
  json gens = json::array();
  for (const auto& p : generator_plaques) {
    gens.push_back(json{{"plaque", smooth_map_to_json(p)},
                        {"form", diff_form_to_json(omega.assign(p))}});
  }
  return json{{"degree", omega.degree},
              {"generators", gens},
              {"extension", "pullback-compatibility"}};
}

}  // namespace tdsc

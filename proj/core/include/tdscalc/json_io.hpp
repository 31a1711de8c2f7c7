#pragma once

#include <json.hpp>

#include "tdscalc/atlas.hpp"

namespace tdsc {

using nlohmann::json;

/// Rationals serialize as {"num":..,"den":..}; each part is a JSON integer
/// when it fits exactly, a decimal string otherwise. Readers accept numbers,
/// strings, and "a/b" literals.
json rational_part_to_json(const BigInt& v);
json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);

json vec_to_json(const RatVec& v);       // array of "a/b" strings
RatVec vec_from_json(const json& j);

/// {"vars": n, "terms": [{"exp": [..], "num": .., "den": ..}]}
json poly_to_json(const PolyExpr& p);
PolyExpr poly_from_json(const json& j);

/// {"dim": n, "degree": k, "coeffs": [{"idx": [..], "num": .., "den": ..}]}
json exterior_to_json(const ExteriorForm& f);
ExteriorForm exterior_from_json(const json& j);

json box_to_json(const Box& b);
Box box_from_json(const json& j);

/// {"domain": {...}, "degree": k, "coeffs": [{"idx": [..], "expr": "..."}]}
json diff_form_to_json(const DifferentialForm& f);
DifferentialForm diff_form_from_json(const json& j);

/// {"domain": {...}, "components": ["expr", ...]}; black-box maps serialize
/// as a named marker and cannot be read back.
json smooth_map_to_json(const SmoothMap& m);
SmoothMap smooth_map_from_json(const json& j);

/// {"ambient": N, "kind": ..., "generators": [...]} plus fixture flags.
json space_to_json(const DiffSpace& x);
DiffSpace space_from_json(const json& j);

json probe_result_to_json(const ProbeResult& r);
json check_report_to_json(const CheckReport& r);

/// Intensional export: the generator cache (plaque, assigned form) pairs
/// plus the extension-law name.
json plaque_indexed_to_json(const PlaqueIndexedForm& omega,
                            std::span<const SmoothMap> generator_plaques);

}  // namespace tdsc

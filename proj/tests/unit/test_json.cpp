#include <doctest.h>

#include "tdscalc/json_io.hpp"
#include "tdscalc/rng.hpp"

using namespace tdsc;

TEST_CASE("rational serialization") {
  Rational r(-3, 4);
  json j = rational_to_json(r);
  CHECK(j["num"] == -3);
  CHECK(j["den"] == 4);
  CHECK(rational_from_json(j) == r);
  CHECK(rational_from_json(json::parse("\"7/2\"")) == Rational(7, 2));
  CHECK(rational_from_json(json(5)) == 5);

  // huge values fall back to strings and survive
  Rational big = Rational(BigInt("123456789012345678901234567890"), 7);
  CHECK(rational_from_json(rational_to_json(big)) == big);
  CHECK(rational_to_json(big)["num"].is_string());

  CHECK_THROWS_AS(rational_from_json(json::parse("{\"num\": 1, \"den\": 0}")), CalcError);
  CHECK_THROWS_AS(rational_from_json(json::parse("[1, 2]")), CalcError);
}

TEST_CASE("polynomial wire format") {
  PolyExpr p = parse_poly("x0^2*x1 + 3", 2);
  json j = poly_to_json(p);
  CHECK(j["vars"] == 2);
  CHECK(j["terms"].size() == 2);
  CHECK(poly_from_json(j) == p);

  Sampler s(111);
  for (int i = 0; i < 40; ++i) {
    PolyExpr q(3);
    for (int t = 0; t < 4; ++t) {
      std::vector<int> e{(int)s.uniform_int(0, 3), (int)s.uniform_int(0, 3),
                         (int)s.uniform_int(0, 3)};
      q.add_term(e, s.rational(9, 5));
    }
    CHECK(poly_from_json(poly_to_json(q)) == q);
  }
  CHECK_THROWS_AS(poly_from_json(json::parse("{\"terms\": []}")), CalcError);
}

TEST_CASE("exterior form wire format") {
  ExteriorForm f(3, 2);
  f.add_coeff(MultiIndex({0, 2}), Rational(5, 3));
  json j = exterior_to_json(f);
  CHECK(j["dim"] == 3);
  CHECK(j["degree"] == 2);
  CHECK(exterior_from_json(j) == f);
}

TEST_CASE("differential form wire format uses expression strings") {
  DifferentialForm w(Box::whole(2), 1);
  w.add_coeff(MultiIndex({0}), parse_poly("x0^2 + 1", 2));
  json j = diff_form_to_json(w);
  CHECK(j["coeffs"][0]["expr"].is_string());
  CHECK(diff_form_from_json(j) == w);

  DifferentialForm bounded(Box::bounds({-1, -1}, {1, 1}), 1);
  bounded.add_coeff(MultiIndex({1}), parse_poly("x0", 2));
  json jb = diff_form_to_json(bounded);
  CHECK(jb["domain"]["lo"].size() == 2);
  CHECK(diff_form_from_json(jb) == bounded);
}

TEST_CASE("smooth map wire format") {
  SmoothMap m(Box::whole(1), {parse_poly("x0", 1), parse_poly("x0^2", 1)});
  json j = smooth_map_to_json(m);
  SmoothMap back = smooth_map_from_json(j);
  CHECK(back.components() == m.components());

  BlackBoxFn bb;
  bb.name = "opaque";
  bb.fn = [](const std::vector<double>& x) { return x; };
  SmoothMap black(Box::whole(2), 2, bb);
  json jb = smooth_map_to_json(black);
  CHECK(jb["blackbox"] == "opaque");
  CHECK_THROWS_AS(smooth_map_from_json(jb), CalcError);
}

TEST_CASE("space wire format") {
  DiffSpace lines = make_lines_plane();
  json j = space_to_json(lines);
  CHECK(j["ambient"] == 2);
  CHECK(j["kind"] == "lines");
  CHECK(j["generators"].size() == 2);
  DiffSpace back = space_from_json(j);
  CHECK(back.name == "lines");

  CHECK(space_from_json(json("euclidean:2")).ambient_dim == 2);
  CHECK(space_from_json(json::parse("{\"kind\": \"euclidean\", \"ambient\": 4}")).ambient_dim ==
        4);
  CHECK_THROWS_AS(space_from_json(json::parse("{\"kind\": \"weird\"}")), CalcError);
}

TEST_CASE("probe results and plaque-indexed export") {
  DiffSpace lines = make_lines_plane();
  SmoothMap p1(Box::whole(1), {parse_poly("x0", 1), PolyExpr(1)});
  SmoothMap p2(Box::whole(1), {PolyExpr(1), parse_poly("x0", 1)});
  auto r = joint_plaque_probe(lines, p1, p2, JointMode::Strong, 4);
  json j = probe_result_to_json(r);
  CHECK(j["found"] == false);
  CHECK(j["certificate"]["kind"] == "line-direction-obstruction");

  DiffSpace r2 = make_euclidean(2);
  DifferentialForm w(Box::whole(2), 1);
  w.add_coeff(MultiIndex({0}), parse_poly("x1", 2));
  PlaqueIndexedForm big = psi(r2, PointwiseForm::from_differential(w));
  std::vector<SmoothMap> gens{p1, p2};
  json exported = plaque_indexed_to_json(big, gens);
  CHECK(exported["generators"].size() == 2);
  CHECK(exported["extension"] == "pullback-compatibility");
  // the exported per-plaque forms parse back as differential forms
  for (const auto& g : exported["generators"])
    CHECK_NOTHROW(diff_form_from_json(g["form"]));
}

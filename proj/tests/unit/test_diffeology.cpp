#include <doctest.h>

#include "tdscalc/spaces.hpp"

using namespace tdsc;

namespace {

SmoothMap line_plaque(const RatVec& base, const RatVec& dir) {
  RatMat col(base.size(), RatVec(1));
  for (size_t i = 0; i < base.size(); ++i) col[i][0] = dir[i];
  return SmoothMap::linear(col, base);
}

}  // namespace

TEST_CASE("is_plaque on the fixture catalogue") {
  DiffSpace lines = make_lines_plane();
  // constants are plaques everywhere (the covering axiom)
  SmoothMap konst = SmoothMap::constant(Box::whole(1), {2, 3});
  CHECK(is_plaque(lines, konst).accepted);
  // closure under precomposition
  SmoothMap diag = line_plaque({0, 0}, {1, 1});
  SmoothMap dbl(Box::whole(1), {parse_poly("2*x0", 1)});
  CHECK(is_plaque(lines, diag).accepted);
  CHECK(is_plaque(lines, compose(diag, dbl)).accepted);
  // curved image is rejected with a reason
  SmoothMap parab(Box::whole(1), {parse_poly("x0", 1), parse_poly("x0^2", 1)});
  auto decision = is_plaque(lines, parab);
  CHECK(!decision.accepted);
  CHECK(!decision.reason.empty());
  // dimension mismatch is an error, not a rejection
  SmoothMap wrong(Box::whole(1), {parse_poly("x0", 1)});
  CHECK_THROWS_AS(is_plaque(lines, wrong), CalcError);
}

TEST_CASE("tangent classes and equivalence") {
  DiffSpace axes = make_axes_union(true);
  // constant plaques carry the zero signature
  SmoothMap konst = SmoothMap::constant(Box::whole(1), {0, 0});
  CHECK(tangent_class(axes, konst).signature == RatVec{0, 0});

  SmoothMap px(Box::whole(1), {parse_poly("x0", 1), PolyExpr(1)});
  CHECK(tangent_class(axes, px).signature == RatVec{1, 0});

  // reparameterization scales the signature
  SmoothMap dbl(Box::whole(1), {parse_poly("2*x0", 1)});
  CHECK(tangent_class(axes, compose(px, dbl)).signature == RatVec{2, 0});

  // restriction leaves the class unchanged
  SmoothMap restricted(Box::centered(1, Rational(1, 16)), px.components());
  CHECK(equivalent(axes, px, restricted, 1));
  CHECK(equivalent(axes, px, restricted, 3));

  // first order agrees, second order does not
  SmoothMap bent(Box::whole(1), {parse_poly("x0 + x0^2", 1), PolyExpr(1)});
  CHECK(equivalent(axes, px, bent, 1));
  CHECK(!equivalent(axes, px, bent, 2));

  SmoothMap other = SmoothMap::constant(Box::whole(1), {1, 0});
  CHECK_THROWS_AS(equivalent(axes, px, other, 1), CalcError);
}

TEST_CASE("tangent spaces across fixtures") {
  Sampler s(51);
  DiffSpace r2 = make_euclidean(2);
  auto rep = tangent_space(r2, {1, 2}, 6, s);
  CHECK(rep.dimension == 2);
  CHECK(rep.union_of_branches_is_linear);

  DiffSpace axes = make_axes_union(true);
  auto origin = tangent_space(axes, {0, 0}, 8, s);
  CHECK(origin.dimension == 2);
  CHECK(!origin.union_of_branches_is_linear);
  CHECK(origin.branches.size() == 2);
  for (const auto& b : origin.branches) CHECK(b.dimension == 1);

  auto off = tangent_space(axes, {1, 0}, 6, s);
  CHECK(off.dimension == 1);
  CHECK(off.union_of_branches_is_linear);

  CHECK_THROWS_AS(tangent_space(axes, {1, 1}, 4, s), CalcError);

  DiffSpace lines = make_lines_plane();
  CHECK(tangent_space(lines, {0, 0}, 8, s).dimension == 2);
}

TEST_CASE("joint plaque probe: euclidean additive route") {
  DiffSpace r2 = make_euclidean(2);
  SmoothMap p1 = line_plaque({1, 1}, {1, 0});
  SmoothMap p2 = line_plaque({1, 1}, {0, 1});
  auto strong = joint_plaque_probe(r2, p1, p2, JointMode::Strong, 8);
  CHECK(strong.found);
  CHECK(strong.witness.has_value());
  // boundary traces reproduce the inputs
  CHECK(strong.witness->eval({Rational(1, 2), 0}) == p1.eval({Rational(1, 2)}));
  CHECK(strong.witness->eval({0, Rational(1, 3)}) == p2.eval({Rational(1, 3)}));

  SmoothMap elsewhere = line_plaque({5, 5}, {1, 0});
  CHECK_THROWS_AS(joint_plaque_probe(r2, p1, elsewhere, JointMode::Strong, 8), CalcError);
}

TEST_CASE("joint plaque probe: line obstructions") {
  DiffSpace lines = make_lines_plane();
  SmoothMap p1 = line_plaque({2, 1}, {1, 0});
  SmoothMap p2 = line_plaque({2, 1}, {0, 1});
  for (JointMode mode : {JointMode::Strong, JointMode::Weak}) {
    auto r = joint_plaque_probe(lines, p1, p2, mode, 8);
    CHECK(!r.found);
    REQUIRE(r.obstruction.has_value());
    CHECK(r.obstruction->kind == "line-direction-obstruction");
    CHECK(r.obstruction->detail.find("strongly transverse") != std::string::npos);
  }
  // same line: the additive construction succeeds even pointwise
  SmoothMap p3 = line_plaque({2, 1}, {2, 0});
  CHECK(joint_plaque_probe(lines, p1, p3, JointMode::Strong, 8).found);
}

TEST_CASE("weaker condition probe") {
  DiffSpace r2 = make_euclidean(2);
  // p(r, s) with shared base curve
  std::vector<PolyExpr> c1{parse_poly("x0 + x1", 2), parse_poly("x0^2 + 2*x1", 2)};
  std::vector<PolyExpr> c2{parse_poly("x0 + x1 + x1^2", 2), parse_poly("x0^2 + 2*x1", 2)};
  SmoothMap p1(Box::whole(2), c1), p2(Box::whole(2), c2);
  auto r = weaker_condition_probe(r2, p1, p2, 8);
  CHECK(r.found);

  auto same = weaker_condition_probe(r2, p1, p1, 8);
  CHECK(same.found);
  CHECK(same.strategy == "shared-plaque-parameter-sum");

  // disagreement at s = 0 is a domain error
  std::vector<PolyExpr> c3{parse_poly("x0 + 1", 2), parse_poly("x0^2", 2)};
  SmoothMap p3(Box::whole(2), c3);
  CHECK_THROWS_AS(weaker_condition_probe(r2, p1, p3, 8), CalcError);

  // incompatible line directions on the lines fixture
  DiffSpace lines = make_lines_plane();
  std::vector<PolyExpr> l1{parse_poly("x1", 2), PolyExpr(2)};          // along e0, const base
  std::vector<PolyExpr> l2{PolyExpr(2), parse_poly("x1", 2)};          // along e1, const base
  auto bad = weaker_condition_probe(lines, SmoothMap(Box::whole(2), l1),
                                    SmoothMap(Box::whole(2), l2), 8);
  CHECK(!bad.found);
  REQUIRE(bad.obstruction.has_value());
}

TEST_CASE("locally integrable probe") {
  DiffSpace r2 = make_euclidean(2);
  std::vector<PolyExpr> formula{parse_poly("x1", 2), parse_poly("x0*x1", 2)};
  SpaceVectorField field;
  field.name = "f";
  field.ambient_formula = formula;
  field.signature_at = [formula](const RatVec& p) {
    return RatVec{formula[0].eval(p), formula[1].eval(p)};
  };
  field.witness_at = [formula](const RatVec& p) {
    RatMat col(2, RatVec(1));
    col[0][0] = formula[0].eval(p);
    col[1][0] = formula[1].eval(p);
    return SmoothMap::linear(col, p);
  };
  SmoothMap p(Box::whole(1), {parse_poly("x0 + 1", 1), parse_poly("x0^2", 1)});
  auto r = locally_integrable_probe(r2, field, p, {0}, 8);
  CHECK(r.found);
  CHECK(r.witness->source_dim() == 2);

  SmoothMap bounded(Box::centered(1, 1), p.components());
  CHECK_THROWS_AS(locally_integrable_probe(r2, field, bounded, {9}, 8), CalcError);

  // on the lines fixture the same field fails along a transversal line
  DiffSpace lines = make_lines_plane();
  SmoothMap vertical = line_plaque({1, 1}, {0, 1});
  // field value at (1,1) is (1,1): not parallel to e1
  auto bad = locally_integrable_probe(lines, field, vertical, {0}, 8);
  CHECK(!bad.found);
  REQUIRE(bad.obstruction.has_value());
  CHECK(bad.obstruction->kind == "not-integrable-along-plaque");
}

TEST_CASE("linearity and continuity checks") {
  Sampler s(53);
  DiffSpace r2 = make_euclidean(2);
  auto rep = check_linear_continuous(r2, 16, s);
  CHECK(rep.pass);

  DiffSpace lines = make_lines_plane();
  auto rep2 = check_linear_continuous(lines, 16, s);
  CHECK(rep2.pass);

  DiffSpace bare = make_euclidean(1);
  bare.plaque_sum = nullptr;
  CHECK_THROWS_AS(check_linear_continuous(bare, 4, s), CalcError);
}

TEST_CASE("smooth map checks") {
  Sampler s(59);
  DiffSpace axes = make_axes_union(true);
  DiffSpace line = make_euclidean(1);
  // (x, y) -> x + y agrees with the branch functions
  RatMat sum{{1, 1}};
  CHECK(check_smooth_map(axes, line, SmoothMap::linear(sum), 8, s).pass);

  DiffSpace lines = make_lines_plane();
  RatMat rot{{Rational(3, 5), Rational(-4, 5)}, {Rational(4, 5), Rational(3, 5)}};
  CHECK(check_smooth_map(lines, lines, SmoothMap::linear(rot), 8, s).pass);

  // a curved map breaks the lines fixture (plaque preservation fails)
  SmoothMap curved(Box::whole(2), {parse_poly("x0", 2), parse_poly("x1 + x0^2", 2)});
  CHECK(!check_smooth_map(lines, lines, curved, 8, s).pass);
}

TEST_CASE("spanning plaques via the iterated probe") {
  DiffSpace r3 = make_euclidean(3);
  std::vector<RatVec> dirs{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  auto plaques = build_spanning_plaques(r3, {1, 1, 1}, dirs);
  REQUIRE(!plaques.empty());
  for (const auto& q : plaques) {
    CHECK(q.source_dim() == 3);
    for (int i = 0; i < 3; ++i) {
      RatVec e(3, 0);
      e[i] = 1;
      SmoothMap ray = plaque_ray(q, {0, 0, 0}, e);
      CHECK(tangent_class(r3, ray).signature == dirs[i]);
    }
  }
  // the direct and iterated routes both contribute
  CHECK(plaques.size() >= 2);
}

#include <doctest.h>

#include "tdscalc/atlas.hpp"

using namespace tdsc;

TEST_CASE("fixture membership and lookup") {
  DiffSpace axes = make_axes_union(true);
  CHECK(axes.membership({3, 0}).member);
  CHECK(axes.membership({3, 0}).branch == "x-axis");
  CHECK(axes.membership({0, -2}).branch == "y-axis");
  CHECK(!axes.membership({1, 1}).member);
  CHECK(axes.membership({0, 0}).branch == "origin");

  DiffSpace punctured = make_axes_union(false);
  CHECK(!punctured.membership({0, 0}).member);
  CHECK(punctured.membership({1, 0}).member);

  CHECK(space_by_name("euclidean:3").ambient_dim == 3);
  CHECK(space_by_name("lines").name == "lines");
  CHECK(space_by_name("tangent_planes").ambient_dim == 3);
  CHECK_THROWS_AS(space_by_name("nonsense"), CalcError);
  CHECK_THROWS_AS(space_by_name("euclidean:x"), CalcError);
}

TEST_CASE("lines-plane plaque predicate") {
  DiffSpace lines = make_lines_plane();
  SmoothMap two_dim(Box::whole(2),
                    {parse_poly("x0 + x1", 2), parse_poly("2*x0 + 2*x1", 2)});
  CHECK(is_plaque(lines, two_dim).accepted);
  SmoothMap vertical(Box::whole(1), {PolyExpr(1), parse_poly("x0^3", 1)});
  CHECK(is_plaque(lines, vertical).accepted);
  SmoothMap bent(Box::whole(2), {parse_poly("x0", 2), parse_poly("x0 + x1^2", 2)});
  CHECK(!is_plaque(lines, bent).accepted);
}

TEST_CASE("sphere-parallels fixture") {
  DiffSpace sphere = make_sphere_parallels();
  CHECK(sphere.membership({0, 0, 1}).branch == "north-pole");
  CHECK(sphere.membership({0, 0, -1}).branch == "south-pole");
  CHECK(sphere.membership({Rational(3, 5), 0, Rational(4, 5)}).branch == "parallel");
  CHECK(!sphere.membership({1, 1, 1}).member);

  // a constant plaque at a rational sphere point
  SmoothMap konst = SmoothMap::constant(Box::whole(1), {Rational(3, 5), 0, Rational(4, 5)});
  CHECK(is_plaque(sphere, konst).accepted);

  // an angle-parameterized parallel passes; nonconstant z fails
  SmoothMap parallel = sphere_parallel_plaque({Rational(3, 5), 0, Rational(4, 5)}, 1.0);
  CHECK(is_plaque(sphere, parallel).accepted);

  BlackBoxFn climb;
  climb.fn = [](const std::vector<double>& t) {
    double z = t[0] / 4;
    double r = std::sqrt(std::max(0.0, 1 - z * z));
    return std::vector<double>{r, 0.0, z};
  };
  SmoothMap climbing(Box::centered(1, 1), 3, climb);
  CHECK(!is_plaque(sphere, climbing).accepted);

  // a polynomial map can only sit on the sphere when constant
  SmoothMap poly_line(Box::whole(1), {parse_poly("x0", 1), PolyExpr(1), PolyExpr(1)});
  CHECK(!is_plaque(sphere, poly_line).accepted);
}

TEST_CASE("tangent-sheets fixture") {
  DiffSpace sheets = make_tangent_sheets();
  CHECK(sheets.membership({1, 2, 0}).branch == "plane");
  CHECK(sheets.membership({1, 2, 5}).branch == "paraboloid");
  CHECK(sheets.membership({0, 0, 0}).branch == "tangency-point");
  CHECK(!sheets.membership({1, 1, 1}).member);

  SmoothMap in_plane(Box::whole(1), {parse_poly("x0", 1), parse_poly("x0^2", 1), PolyExpr(1)});
  CHECK(is_plaque(sheets, in_plane).accepted);
  SmoothMap in_parab(Box::whole(1),
                     {parse_poly("x0", 1), PolyExpr(1), parse_poly("x0^2", 1)});
  CHECK(is_plaque(sheets, in_parab).accepted);
  SmoothMap off(Box::whole(1), {parse_poly("x0", 1), PolyExpr(1), parse_poly("x0", 1)});
  CHECK(!is_plaque(sheets, off).accepted);

  // both sheets share first-order data at the origin
  Sampler s(89);
  auto rep = tangent_space(sheets, {0, 0, 0}, 8, s);
  CHECK(rep.dimension == 2);
  CHECK(rep.union_of_branches_is_linear);
}

TEST_CASE("atlas fixtures cohere") {
  Sampler s(97);
  for (const char* name : {"atlas:plane2", "atlas:circle2", "atlas:sphere2"}) {
    AtlasSpace m = atlas_by_name(name);
    // transitions compose to the identity on recorded overlap samples
    for (const auto& sample : m.atlas.overlap_samples) {
      SmoothMap there = m.atlas.transition(sample.chart_to, sample.chart_from);
      SmoothMap back = m.atlas.transition(sample.chart_from, sample.chart_to);
      RatVec u = sample.param;
      RatVec round = back.eval(there.eval(u));
      Rational tol = m.atlas.tol == 0 ? Rational(0) : m.atlas.tol;
      REQUIRE(close_vec(round, u, tol));
    }
    // membership of sampled members
    for (const auto& f : m.space.sample_members(6, s)) REQUIRE(m.space.is_member(f));
  }
  CHECK_THROWS_AS(atlas_by_name("atlas:torus"), CalcError);
}

TEST_CASE("chart collections: construction, corruption, conversion") {
  Sampler s(101);
  AtlasSpace plane = make_atlas_plane2();

  // zero form: every chart form is zero
  PointwiseForm zero = PointwiseForm::from_differential(DifferentialForm(Box::whole(2), 2));
  ChartFormCollection zc = chart_collection_from_pointwise(plane, zero);
  for (const auto& f : zc.forms) CHECK(f.witness->is_zero());

  // a constant-coefficient 2-form transitions by the jacobian determinant (1
  // for translations): both charts carry the same coefficient
  DifferentialForm vol = DifferentialForm::basis(Box::whole(2), MultiIndex({0, 1}));
  ChartFormCollection vc =
      chart_collection_from_pointwise(plane, PointwiseForm::from_differential(vol));
  CHECK(collection_compatibility_check(plane, vc).pass);
  CHECK(*vc.forms[0].witness == *vc.forms[1].witness);

  // corrupt one chart: compatibility fails with a witness, conversion throws
  ChartFormCollection bad = vc;
  DifferentialForm bump(Box::whole(2), 2);
  bump.add_coeff(MultiIndex({0, 1}), PolyExpr::constant(2, Rational(1, 5)));
  bad.forms[1] = PointwiseForm::from_differential(*bad.forms[1].witness + bump);
  auto report = collection_compatibility_check(plane, bad);
  CHECK(!report.pass);
  CHECK(!report.witness.empty());
  CHECK_THROWS_AS(pointwise_from_chart_collection(plane, bad), CalcError);

  // single-chart atlas: direct pullback round trip
  AtlasSpace single = plane;
  single.atlas.charts.resize(1);
  single.atlas.overlap_samples.clear();
  PointwiseForm omega = PointwiseForm::from_differential([&] {
    DifferentialForm w(Box::whole(2), 1);
    w.add_coeff(MultiIndex({0}), parse_poly("x0*x1", 2));
    w.add_coeff(MultiIndex({1}), parse_poly("x1^2 + 1", 2));
    return w;
  }());
  ChartFormCollection sc = chart_collection_from_pointwise(single, omega);
  PointwiseForm back = pointwise_from_chart_collection(single, sc);
  for (int i = 0; i < 6; ++i) {
    RatVec f = s.vector(2, 2, 2);
    std::vector<RatVec> v{s.vector(2, 2, 2)};
    CHECK(back.at(f).evaluate(v) == omega.at(f).evaluate(v));
  }
}

TEST_CASE("bundle sections round trip") {
  Sampler s(103);
  AtlasSpace plane = make_atlas_plane2();
  for (int rep = 0; rep < 20; ++rep) {
    int k = (int)s.uniform_int(0, 2);
    DifferentialForm w(Box::whole(2), k);
    for (const auto& idx : MultiIndex::all(2, k)) {
      PolyExpr p(2);
      for (int t = 0; t < 2; ++t) {
        std::vector<int> e{(int)s.uniform_int(0, 2), (int)s.uniform_int(0, 2)};
        p.add_term(e, s.rational(4, 2));
      }
      w.add_coeff(idx, p);
    }
    PointwiseForm omega = PointwiseForm::from_differential(w);
    BundleSection section = section_from_pointwise(plane, omega);
    PointwiseForm back = pointwise_from_section(plane, section);
    for (int i = 0; i < 3; ++i) {
      RatVec f = s.vector(2, 2, 2);
      std::vector<RatVec> vs;
      for (int j = 0; j < k; ++j) vs.push_back(s.vector(2, 2, 2));
      CHECK(back.at(f).evaluate(vs) == omega.at(f).evaluate(vs));
    }
  }
}

TEST_CASE("cutoff and bump extension") {
  CHECK(cutoff_1d(Rational(1, 2), 1, 2) == 1);
  CHECK(cutoff_1d(Rational(5, 2), 1, 2) == 0);
  CHECK(cutoff_1d(Rational(3, 2), 1, 2) == Rational(1, 2));
  CHECK_THROWS_AS(cutoff_1d(0, 2, 1), CalcError);

  VectorFieldOnBox local(Box::whole(1), {parse_poly("x0 + 1", 1)});
  Box inner = Box::bounds({-1}, {1});
  Box outer = Box::bounds({-3}, {3});
  auto field = bump_extension(local, inner, outer);
  CHECK(field.signature_at({Rational(1, 2)}) == RatVec{Rational(3, 2)});
  CHECK(field.signature_at({4}) == RatVec{0});

  CHECK_THROWS_AS(bump_extension(local, outer, inner), CalcError);
}

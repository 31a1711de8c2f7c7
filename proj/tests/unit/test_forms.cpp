#include <doctest.h>

#include "tdscalc/forms.hpp"
#include "tdscalc/rng.hpp"

using namespace tdsc;

namespace {

PolyExpr rand_poly(Sampler& s, int vars, int deg, int terms) {
  PolyExpr p(vars);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(vars, 0);
    int budget = deg;
    for (int v = 0; v < vars; ++v) {
      e[v] = (int)s.uniform_int(0, budget);
      budget -= e[v];
    }
    p.add_term(e, s.rational(4, 2));
  }
  return p;
}

DifferentialForm rand_form(Sampler& s, int dim, int k, int deg = 2) {
  DifferentialForm f(Box::whole(dim), k);
  for (const auto& idx : MultiIndex::all(dim, k))
    if (s.coin() || f.coeffs().empty()) f.add_coeff(idx, rand_poly(s, dim, deg, 2));
  return f;
}

VectorFieldOnBox rand_field(Sampler& s, int dim, int deg = 2) {
  std::vector<PolyExpr> comps;
  for (int i = 0; i < dim; ++i) comps.push_back(rand_poly(s, dim, deg, 2));
  return VectorFieldOnBox(Box::whole(dim), std::move(comps));
}

}  // namespace

TEST_CASE("eval_at") {
  Box b2 = Box::whole(2);
  DifferentialForm dxdy = DifferentialForm::basis(b2, MultiIndex({0, 1}));
  ExteriorForm at = dxdy.eval_at({5, -3});
  CHECK(at == ExteriorForm::basis(2, MultiIndex({0, 1})));

  // x0 dx1 vanishes on the hyperplane x0 = 0
  DifferentialForm w(b2, 1);
  w.add_coeff(MultiIndex({1}), PolyExpr::variable(2, 0));
  CHECK(w.eval_at({0, 7}).is_zero());

  // (x0^2 + 1) dx0 at x0 = 2 is the covector 5 dx0
  DifferentialForm v(Box::whole(1), 1);
  v.add_coeff(MultiIndex({0}), parse_poly("x0^2 + 1", 1));
  CHECK(v.eval_at({2}).covector_components() == RatVec{5});

  DifferentialForm bounded(Box::bounds({0}, {1}), 1);
  bounded.add_coeff(MultiIndex({0}), PolyExpr::constant(1, 1));
  CHECK_THROWS_AS(bounded.eval_at({2}), CalcError);
}

TEST_CASE("apply_to_fields") {
  Box b2 = Box::whole(2);
  DifferentialForm dxdy = DifferentialForm::basis(b2, MultiIndex({0, 1}));
  std::vector<VectorFieldOnBox> frame{VectorFieldOnBox::coordinate(2, 0),
                                      VectorFieldOnBox::coordinate(2, 1)};
  CHECK(apply_to_fields(dxdy, frame) == PolyExpr::constant(2, 1));

  Sampler s(23);
  DifferentialForm w = rand_form(s, 3, 2);
  VectorFieldOnBox xi = rand_field(s, 3);
  std::vector<VectorFieldOnBox> repeated{xi, xi};
  CHECK(apply_to_fields(w, repeated).is_zero());

  // module linearity over smooth functions
  for (int i = 0; i < 30; ++i) {
    DifferentialForm omega = rand_form(s, 2, 2);
    VectorFieldOnBox a = rand_field(s, 2), b = rand_field(s, 2);
    PolyExpr f = rand_poly(s, 2, 2, 2);
    std::vector<VectorFieldOnBox> scaled{a.scaled_by(f), b};
    std::vector<VectorFieldOnBox> plain{a, b};
    CHECK(apply_to_fields(omega, scaled) == f * apply_to_fields(omega, plain));
  }
  CHECK_THROWS_AS(apply_to_fields(dxdy, std::vector<VectorFieldOnBox>{frame[0]}), CalcError);
}

TEST_CASE("wedge of differential forms") {
  Sampler s(29);
  Box b3 = Box::whole(3);
  // a ^ a = 0 in odd degree
  DifferentialForm a = rand_form(s, 3, 1);
  CHECK(wedge_forms(a, a).is_zero());

  // (x0 dx1) ^ dx2 = x0 dx1^dx2, checked at sample points
  DifferentialForm x0dx1(b3, 1);
  x0dx1.add_coeff(MultiIndex({1}), PolyExpr::variable(3, 0));
  DifferentialForm dx2 = DifferentialForm::basis(b3, MultiIndex({2}));
  DifferentialForm prod = wedge_forms(x0dx1, dx2);
  for (int i = 0; i < 5; ++i) {
    RatVec x = s.vector(3, 4, 2);
    ExteriorForm expect = ExteriorForm::basis(3, MultiIndex({1, 2})).scaled(x[0]);
    CHECK(prod.eval_at(x) == expect);
  }

  // skew law with polynomial coefficients
  for (int i = 0; i < 30; ++i) {
    int k = (int)s.uniform_int(0, 2), l = (int)s.uniform_int(0, 2);
    DifferentialForm u = rand_form(s, 3, k), v = rand_form(s, 3, l);
    Rational sign = (k * l) % 2 == 0 ? 1 : -1;
    CHECK(wedge_forms(u, v) == wedge_forms(v, u).scaled(sign));
  }
}

TEST_CASE("smooth pullback: documented examples") {
  // identity
  Sampler s(31);
  DifferentialForm w = rand_form(s, 2, 1);
  CHECK(pullback_smooth(SmoothMap::identity(2), w) == w);

  // a 2-form dies on a 1-dimensional source
  SmoothMap curve(Box::whole(1), {parse_poly("x0", 1), parse_poly("x0^2", 1)});
  DifferentialForm vol = DifferentialForm::basis(Box::whole(2), MultiIndex({0, 1}));
  CHECK(pullback_smooth(curve, vol).is_zero());

  // f(r, s) = (r + s, r s): f^*(dx0 ^ dx1) = (r - s) dr ^ ds
  SmoothMap f(Box::whole(2), {parse_poly("x0 + x1", 2), parse_poly("x0*x1", 2)});
  DifferentialForm pulled = pullback_smooth(f, vol);
  DifferentialForm expect(Box::whole(2), 2);
  expect.add_coeff(MultiIndex({0, 1}), parse_poly("x0 - x1", 2));
  CHECK(pulled == expect);
}

TEST_CASE("smooth pullback: functoriality and pointwise consistency") {
  Sampler s(37);
  for (int i = 0; i < 50; ++i) {
    int a = (int)s.uniform_int(1, 3), b = (int)s.uniform_int(1, 3),
        d = (int)s.uniform_int(1, 3);
    int k = (int)s.uniform_int(0, std::min(2, d));
    DifferentialForm w = rand_form(s, d, k);
    std::vector<PolyExpr> fc, gc;
    for (int j = 0; j < d; ++j) fc.push_back(rand_poly(s, b, 2, 2));
    for (int j = 0; j < b; ++j) gc.push_back(rand_poly(s, a, 2, 2));
    SmoothMap f(Box::whole(b), fc), g(Box::whole(a), gc);
    CHECK(pullback_smooth(compose(f, g), w) == pullback_smooth(g, pullback_smooth(f, w)));
    RatVec x = s.vector(b, 2, 2);
    CHECK(pullback_smooth(f, w).eval_at(x) ==
          pullback_linear(f.jacobian(x), w.eval_at(f.eval(x))));
  }
}

TEST_CASE("exterior derivative") {
  Box b2 = Box::whole(2);
  // constants die
  DifferentialForm konst = DifferentialForm::basis(b2, MultiIndex({0, 1}));
  CHECK(exterior_derivative(konst).is_zero());

  // d(x0 dx1) = dx0 ^ dx1
  DifferentialForm w(b2, 1);
  w.add_coeff(MultiIndex({1}), PolyExpr::variable(2, 0));
  CHECK(exterior_derivative(w) == DifferentialForm::basis(b2, MultiIndex({0, 1})));

  Sampler s(41);
  for (int i = 0; i < 50; ++i) {
    int dim = (int)s.uniform_int(1, 4);
    // d(df) = 0
    PolyExpr f = rand_poly(s, dim, 4, 4);
    CHECK(exterior_derivative(differential_of_function(Box::whole(dim), f)).is_zero());
    // antiderivation
    int k = (int)s.uniform_int(0, 2);
    DifferentialForm aa = rand_form(s, dim, k, 3), bb = rand_form(s, dim, 1, 3);
    Rational sign = k % 2 == 0 ? 1 : -1;
    CHECK(exterior_derivative(wedge_forms(aa, bb)) ==
          wedge_forms(exterior_derivative(aa), bb) +
              wedge_forms(aa, exterior_derivative(bb)).scaled(sign));
    // d o d = 0 in general
    CHECK(exterior_derivative(exterior_derivative(aa)).is_zero());
  }
}

TEST_CASE("differential of a function") {
  Box b2 = Box::whole(2);
  CHECK(differential_of_function(b2, PolyExpr::variable(2, 0)) ==
        DifferentialForm::basis(b2, MultiIndex({0})));
  CHECK(differential_of_function(b2, PolyExpr::constant(2, 5)).is_zero());

  // df applied to a field is the directional derivative
  PolyExpr f = parse_poly("x0*x1", 2);
  DifferentialForm df = differential_of_function(b2, f);
  std::vector<VectorFieldOnBox> e0{VectorFieldOnBox::coordinate(2, 0)};
  CHECK(apply_to_fields(df, e0) == PolyExpr::variable(2, 1));

  Sampler s(43);
  for (int i = 0; i < 20; ++i) {
    PolyExpr g = rand_poly(s, 3, 3, 3);
    VectorFieldOnBox xi = rand_field(s, 3);
    PolyExpr expect(3);
    for (int j = 0; j < 3; ++j) expect += g.partial(j) * xi.components[j];
    std::vector<VectorFieldOnBox> one{xi};
    CHECK(apply_to_fields(differential_of_function(Box::whole(3), g), one) == expect);
  }
}

TEST_CASE("metric dual") {
  Box b2 = Box::whole(2);
  // Euclidean gradient
  PolyExpr f = parse_poly("x0^2 + x0*x1", 2);
  DifferentialForm df = differential_of_function(b2, f);
  VectorFieldOnBox grad = metric_dual(df, mat_identity(2));
  CHECK(grad.components[0] == f.partial(0));
  CHECK(grad.components[1] == f.partial(1));

  // dx0 under the identity is d/dx0
  DifferentialForm dx0 = DifferentialForm::basis(b2, MultiIndex({0}));
  VectorFieldOnBox dual = metric_dual(dx0, mat_identity(2));
  CHECK(dual.components[0] == PolyExpr::constant(2, 1));
  CHECK(dual.components[1].is_zero());

  // scaled metric halves the dual
  RatMat g{{2, 0}, {0, 1}};
  VectorFieldOnBox half = metric_dual(dx0, g);
  CHECK(half.components[0] == PolyExpr::constant(2, Rational(1, 2)));

  RatMat asym{{1, 1}, {0, 1}};
  CHECK_THROWS_AS(metric_dual(dx0, asym), CalcError);
  RatMat indef{{1, 0}, {0, -1}};
  CHECK_THROWS_AS(metric_dual(dx0, indef), CalcError);
}

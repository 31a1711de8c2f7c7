#include <doctest.h>

#include "tdscalc/rng.hpp"
#include "tdscalc/smooth_map.hpp"

using namespace tdsc;

namespace {

// Independent oracle: multiply two term lists pair by pair and collect.
// Deliberately not the map-based product the implementation uses.
using TermList = std::vector<std::pair<std::vector<int>, Rational>>;

TermList to_terms(const PolyExpr& p) {
  TermList out;
  for (const auto& [e, c] : p.terms()) out.emplace_back(e, c);
  return out;
}

PolyExpr oracle_product(const PolyExpr& a, const PolyExpr& b) {
  PolyExpr out(a.num_vars());
  for (const auto& [ea, ca] : to_terms(a))
    for (const auto& [eb, cb] : to_terms(b)) {
      std::vector<int> e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

PolyExpr rand_poly(Sampler& s, int vars, int deg, int terms) {
  PolyExpr p(vars);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(vars, 0);
    int budget = deg;
    for (int v = 0; v < vars; ++v) {
      e[v] = (int)s.uniform_int(0, budget);
      budget -= e[v];
    }
    p.add_term(e, s.rational(5, 3));
  }
  return p;
}

}  // namespace

TEST_CASE("parsing the documented examples") {
  PolyExpr p = parse_poly("x0^2*x1 + 3", 2);
  CHECK(p.coeff({2, 1}) == 1);
  CHECK(p.coeff({0, 0}) == 3);
  CHECK(p.terms().size() == 2);

  CHECK(parse_poly("0", 3).is_zero());

  // expand by the independent term-list product
  PolyExpr lhs = parse_poly("(x0+1)*(x0-1)", 1);
  PolyExpr expect = oracle_product(parse_poly("x0+1", 1), parse_poly("x0-1", 1));
  CHECK(lhs == expect);
  CHECK(lhs.coeff({2}) == 1);
  CHECK(lhs.coeff({0}) == -1);
  CHECK(lhs.coeff({1}) == 0);
}

TEST_CASE("parser precedence and literals") {
  CHECK(parse_poly("-x0^2", 1) == -parse_poly("x0^2", 1));
  CHECK(parse_poly("2*x0^3", 1).coeff({3}) == 2);
  CHECK(parse_poly("1/2*x0 + 1/2*x0", 1) == parse_poly("x0", 1));
  CHECK(parse_poly("3/4", 1).constant_term() == Rational(3, 4));
  CHECK(parse_poly("x0 - x1 - x1", 2) == parse_poly("x0 - 2*x1", 2));
  // ^ binds tighter than unary minus; chains associate left
  CHECK(parse_poly("x0^2^3", 1).coeff({6}) == 1);
}

TEST_CASE("parser errors carry positions") {
  CHECK_THROWS_WITH_AS(parse_poly("x0 + ", 1), doctest::Contains("position"), CalcError);
  CHECK_THROWS_WITH_AS(parse_poly("x3", 2), doctest::Contains("out of range"), CalcError);
  CHECK_THROWS_WITH_AS(parse_poly("x0/2", 1), doctest::Contains("rational literal"),
                       CalcError);
  CHECK_THROWS_AS(parse_poly("x0 * * x1", 2), CalcError);
  CHECK_THROWS_AS(parse_poly("(x0", 1), CalcError);
  CHECK_THROWS_AS(parse_poly("x0 ^ x1", 2), CalcError);
}

TEST_CASE("print-parse is a fixed point on a 50-expression corpus") {
  Sampler s(42);
  for (int i = 0; i < 50; ++i) {
    int vars = (int)s.uniform_int(1, 4);
    PolyExpr p = rand_poly(s, vars, 4, (int)s.uniform_int(1, 6));
    std::string text = p.to_string();
    PolyExpr round = parse_poly(text, vars);
    CHECK(round == p);
    CHECK(round.to_string() == text);
  }
}

TEST_CASE("evaluation") {
  PolyExpr p = parse_poly("x0^2*x1 + 3", 2);
  CHECK(p.eval({2, 5}) == 23);
  CHECK(p.eval({0, 0}) == p.constant_term());
  CHECK(PolyExpr(2).eval({7, 9}) == 0);
  CHECK_THROWS_AS(p.eval({1}), CalcError);
}

TEST_CASE("formal partial derivatives") {
  PolyExpr p = parse_poly("x0^2*x1", 2);
  CHECK(p.partial(0) == parse_poly("2*x0*x1", 2));
  CHECK(parse_poly("5", 2).partial(1).is_zero());
  CHECK_THROWS_AS(p.partial(2), CalcError);

  Sampler s(7);
  for (int i = 0; i < 40; ++i) {
    int vars = (int)s.uniform_int(2, 4);
    PolyExpr a = rand_poly(s, vars, 4, 4);
    // mixed partials commute
    CHECK(a.partial(0).partial(1) == a.partial(1).partial(0));
    // Leibniz rule, exact
    PolyExpr b = rand_poly(s, vars, 4, 4);
    CHECK((a * b).partial(0) == a.partial(0) * b + a * b.partial(0));
  }
}

TEST_CASE("composition of smooth maps") {
  SmoothMap id = SmoothMap::identity(2);
  SmoothMap g(Box::whole(1), {parse_poly("x0 + 1", 1), parse_poly("x0^2", 1)});
  CHECK(compose(id, g).components() == g.components());

  // f(y) = y^2 after g(t) = t + 1
  SmoothMap f(Box::whole(1), {parse_poly("x0^2", 1)});
  SmoothMap g1(Box::whole(1), {parse_poly("x0 + 1", 1)});
  CHECK(compose(f, g1).components()[0] ==
        oracle_product(parse_poly("x0+1", 1), parse_poly("x0+1", 1)));

  CHECK_THROWS_AS(compose(f, g), CalcError);  // arity mismatch

  Sampler s(11);
  for (int i = 0; i < 100; ++i) {
    SmoothMap inner(Box::whole(2), {rand_poly(s, 2, 2, 3), rand_poly(s, 2, 2, 3),
                                    rand_poly(s, 2, 2, 3)});
    SmoothMap outer(Box::whole(3), {rand_poly(s, 3, 2, 3)});
    SmoothMap comp = compose(outer, inner);
    RatVec x = s.vector(2, 3, 2);
    CHECK(comp.eval(x) == outer.eval(inner.eval(x)));
  }
}

TEST_CASE("jets at the origin") {
  SmoothMap curve(Box::whole(1), {parse_poly("x0", 1), parse_poly("x0^2", 1)});
  Jet j = jet_at_zero(curve, 1);
  CHECK(j.value() == RatVec{0, 0});
  CHECK(j.first_derivative(0) == RatVec{1, 0});

  SmoothMap konst = SmoothMap::constant(Box::whole(1), {3, 4});
  Jet jk = jet_at_zero(konst, 3);
  for (const auto& [alpha, vals] : jk.coeffs) {
    int total = 0;
    for (int a : alpha) total += a;
    if (total >= 1) CHECK(vals == RatVec{0, 0});
  }

  SmoothMap cubic(Box::whole(1), {parse_poly("x0^3", 1)});
  Jet jc = jet_at_zero(cubic, 2);
  CHECK(jc.value() == RatVec{0});
  CHECK(jc.first_derivative(0) == RatVec{0});
  CHECK(jc.coeffs.at({2}) == RatVec{0});

  SmoothMap off(Box::bounds({1}, {2}), {parse_poly("x0", 1)});
  CHECK_THROWS_AS(jet_at_zero(off, 1), CalcError);
}

TEST_CASE("jet determines the polynomial up to its degree") {
  Sampler s(13);
  for (int i = 0; i < 30; ++i) {
    int vars = (int)s.uniform_int(1, 3);
    int deg = (int)s.uniform_int(0, 3);
    PolyExpr p = rand_poly(s, vars, deg, 4);
    SmoothMap m(Box::whole(vars), {p});
    Jet j = jet_at_zero(m, std::max(deg, 0));
    CHECK(jet_taylor(j, 0) == p);
  }
}

TEST_CASE("jacobian") {
  CHECK(SmoothMap::identity(3).jacobian({1, 2, 3}) == mat_identity(3));

  RatMat a{{1, 2}, {3, 4}};
  SmoothMap lin = SmoothMap::linear(a);
  CHECK(lin.jacobian({5, 6}) == a);

  SmoothMap f(Box::whole(2), {parse_poly("x0^2", 2), parse_poly("x0*x1", 2)});
  RatMat expect{{2, 0}, {2, 1}};
  CHECK(f.jacobian({1, 2}) == expect);
}

TEST_CASE("chain rule for jacobians, exact") {
  Sampler s(17);
  for (int i = 0; i < 40; ++i) {
    SmoothMap g(Box::whole(2), {rand_poly(s, 2, 2, 3), rand_poly(s, 2, 2, 3)});
    SmoothMap f(Box::whole(2), {rand_poly(s, 2, 2, 3), rand_poly(s, 2, 2, 3)});
    RatVec x = s.vector(2, 3, 2);
    RatMat lhs = compose(f, g).jacobian(x);
    RatMat rhs = mat_mul(f.jacobian(g.eval(x)), g.jacobian(x));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("black-box mode: finite differences against exact values") {
  // the same polynomial evaluated through an opaque rule
  PolyExpr p = parse_poly("x0^3 + 2*x0*x1", 2);
  BlackBoxFn bb;
  bb.fn = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[0] * x[0] + 2 * x[0] * x[1]};
  };
  SmoothMap opaque(Box::whole(2), 1, bb);
  SmoothMap exact(Box::whole(2), {p});
  Jet jn = jet_at_zero(opaque, 2);
  Jet je = jet_at_zero(exact, 2);
  CHECK(!jn.exact);
  CHECK(jets_match(jn, je, Rational(1, 1000000)));

  RatVec pt{Rational(1, 2), Rational(1, 3)};
  RatMat jac_n = opaque.jacobian(pt);
  RatMat jac_e = exact.jacobian(pt);
  for (int i = 0; i < 1; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(abs_val(jac_n[i][j] - jac_e[i][j]) < Rational(1, 1000000));
}

TEST_CASE("exact division by a variable") {
  PolyExpr p = parse_poly("x0^2 + 3*x0", 1);
  CHECK(p.divide_by_variable(0) == parse_poly("x0 + 3", 1));
  CHECK_THROWS_AS(parse_poly("x0 + 1", 1).divide_by_variable(0), CalcError);
}

TEST_CASE("composition checks the outer domain lazily") {
  // f lives on (-1, 1); g(t) = t^2 escapes it for |t| > 1
  SmoothMap f(Box::centered(1, 1), {parse_poly("x0 + 1", 1)});
  SmoothMap g(Box::whole(1), {parse_poly("x0^2", 1)});
  SmoothMap fg = compose(f, g);
  CHECK(fg.eval({Rational(1, 2)}) == RatVec{Rational(5, 4)});
  CHECK_THROWS_AS(fg.eval({2}), CalcError);
  // nesting another layer keeps the check alive
  SmoothMap h(Box::whole(1), {parse_poly("x0 + 3", 1)});
  SmoothMap fgh = compose(fg, h);
  CHECK_THROWS_AS(fgh.eval({0}), CalcError);  // g(h(0)) = 9 leaves f's box

  // jacobian respects the plain domain box
  SmoothMap off(Box::bounds({0}, {1}), {parse_poly("x0^2", 1)});
  CHECK_THROWS_AS(off.jacobian({5}), CalcError);
}

#include <doctest.h>

#include "tdscalc/exterior.hpp"
#include "tdscalc/rng.hpp"

using namespace tdsc;

namespace {

// Independent oracle: determinant by cofactor expansion along the first row.
Rational cofactor_det(const RatMat& m) {
  size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Rational acc = 0;
  for (size_t c = 0; c < n; ++c) {
    RatMat sub;
    for (size_t r = 1; r < n; ++r) {
      RatVec row;
      for (size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      sub.push_back(std::move(row));
    }
    Rational term = m[0][c] * cofactor_det(sub);
    acc += (c % 2 == 0) ? term : -term;
  }
  return acc;
}

// Independent oracle: the shuffle permutation sum for a wedge of 1-forms.
Rational shuffle_pair_eval(const ExteriorForm& a, const ExteriorForm& b, const RatVec& v1,
                           const RatVec& v2) {
  std::vector<RatVec> x{v1}, y{v2};
  return a.evaluate(x) * b.evaluate(y) - a.evaluate(y) * b.evaluate(x);
}

ExteriorForm rand_form(Sampler& s, int dim, int k) {
  ExteriorForm f(dim, k);
  auto all = MultiIndex::all(dim, k);
  for (int t = 0; t < 3 && !all.empty(); ++t)
    f.add_coeff(all[(size_t)s.uniform_int(0, (long long)all.size() - 1)], s.rational(5, 2));
  return f;
}

}  // namespace

TEST_CASE("multi-index construction") {
  CHECK_THROWS_AS(MultiIndex({2, 1}), CalcError);
  CHECK_THROWS_AS(MultiIndex({1, 1}), CalcError);
  CHECK(MultiIndex::all(4, 2).size() == 6);
  CHECK(MultiIndex::all(3, 5).empty());
}

TEST_CASE("evaluate: unit determinant and alternation") {
  ExteriorForm w = ExteriorForm::basis(2, MultiIndex({0, 1}));
  std::vector<RatVec> e{{1, 0}, {0, 1}};
  CHECK(w.evaluate(e) == 1);

  Sampler s(3);
  ExteriorForm f = rand_form(s, 3, 2);
  RatVec v = s.vector(3, 4, 2);
  std::vector<RatVec> repeated{v, v};
  CHECK(f.evaluate(repeated) == 0);

  // arity and dimension mismatches are errors
  std::vector<RatVec> too_few{{1, 0}};
  CHECK_THROWS_AS(w.evaluate(too_few), CalcError);
  std::vector<RatVec> wrong_dim{{1, 0, 0}, {0, 1, 0}};
  CHECK_THROWS_AS(w.evaluate(wrong_dim), CalcError);
}

TEST_CASE("volume form equals the determinant oracle") {
  Sampler s(5);
  for (int i = 0; i < 50; ++i) {
    RatMat m(3, RatVec(3));
    std::vector<RatVec> rows;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] = Rational(s.uniform_int(-5, 5));
      rows.push_back(m[r]);
    }
    CHECK(ExteriorForm::volume(3).evaluate(rows) == cofactor_det(m));
  }
}

TEST_CASE("wedge of 1-forms matches the two-term permutation sum") {
  Sampler s(7);
  for (int i = 0; i < 100; ++i) {
    int dim = (int)s.uniform_int(2, 5);
    ExteriorForm a = ExteriorForm::covector(s.vector(dim, 4, 2));
    ExteriorForm b = ExteriorForm::covector(s.vector(dim, 4, 2));
    RatVec v1 = s.vector(dim, 4, 2), v2 = s.vector(dim, 4, 2);
    std::vector<RatVec> vs{v1, v2};
    CHECK(wedge(a, b).evaluate(vs) == shuffle_pair_eval(a, b, v1, v2));
  }
}

TEST_CASE("wedge basics") {
  // wedge of basis covectors is the basis 2-form
  ExteriorForm x0 = ExteriorForm::covector({1, 0});
  ExteriorForm x1 = ExteriorForm::covector({0, 1});
  ExteriorForm w = wedge(x0, x1);
  CHECK(w == ExteriorForm::basis(2, MultiIndex({0, 1})));

  // zero absorbs
  Sampler s(9);
  ExteriorForm a = rand_form(s, 3, 1);
  CHECK(wedge(a, ExteriorForm(3, 2)).is_zero());

  // degree-0 forms act by scalar multiplication
  ExteriorForm half = ExteriorForm::scalar(3, Rational(1, 2));
  CHECK(wedge(half, a) == a.scaled(Rational(1, 2)));
  CHECK(wedge(a, half) == a.scaled(Rational(1, 2)));

  // degree overflow collapses to zero
  ExteriorForm top = ExteriorForm::volume(2);
  ExteriorForm one = ExteriorForm::covector({1, 1});
  CHECK(wedge(top, one).is_zero());
}

TEST_CASE("skew commutativity, associativity, bilinearity") {
  Sampler s(11);
  for (int i = 0; i < 100; ++i) {
    int dim = (int)s.uniform_int(1, 5);
    int k = (int)s.uniform_int(0, 3), l = (int)s.uniform_int(0, 3);
    ExteriorForm a = rand_form(s, dim, k), b = rand_form(s, dim, l);
    Rational sign = (k * l) % 2 == 0 ? 1 : -1;
    CHECK(wedge(a, b) == wedge(b, a).scaled(sign));
    ExteriorForm c = rand_form(s, dim, (int)s.uniform_int(0, 2));
    CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
    ExteriorForm a2 = rand_form(s, dim, k);
    CHECK(wedge(a + a2, b) == wedge(a, b) + wedge(a2, b));
  }
}

TEST_CASE("decomposable determinant identity") {
  std::vector<RatVec> id_cov{{1, 0}, {0, 1}};
  std::vector<RatVec> id_vec{{1, 0}, {0, 1}};
  CHECK(decomposable_eval(id_cov, id_vec) == 1);

  Sampler s(13);
  // repeated covector kills the determinant
  RatVec w = s.vector(3, 3, 2);
  std::vector<RatVec> covs{w, w};
  std::vector<RatVec> vecs{s.vector(3, 3, 2), s.vector(3, 3, 2)};
  CHECK(decomposable_eval(covs, vecs) == 0);

  for (int i = 0; i < 60; ++i) {
    int dim = (int)s.uniform_int(2, 5);
    std::vector<RatVec> cs{s.vector(dim, 4, 1), s.vector(dim, 4, 1)};
    std::vector<RatVec> vs{s.vector(dim, 4, 1), s.vector(dim, 4, 1)};
    ExteriorForm prod = wedge(ExteriorForm::covector(cs[0]), ExteriorForm::covector(cs[1]));
    CHECK(decomposable_eval(cs, vs) == prod.evaluate(vs));
  }
  CHECK_THROWS_AS(decomposable_eval(covs, std::vector<RatVec>{vecs[0]}), CalcError);
}

TEST_CASE("projection volume forms") {
  std::vector<RatVec> coord{{1, 0, 0}, {0, 1, 0}};
  CHECK(projection_volume_form(3, coord) == ExteriorForm::basis(3, MultiIndex({0, 1})));

  std::vector<RatVec> full{{1, 0}, {0, 1}};
  CHECK(projection_volume_form(2, full) == ExteriorForm::volume(2));

  // project onto span((3/5, 4/5)) and measure e0
  std::vector<RatVec> tilted{{Rational(3, 5), Rational(4, 5)}};
  ExteriorForm w = projection_volume_form(2, tilted);
  std::vector<RatVec> e0{{1, 0}};
  CHECK(w.evaluate(e0) == Rational(3, 5));

  std::vector<RatVec> skew{{1, 1}};
  CHECK_THROWS_AS(projection_volume_form(2, skew), CalcError);
}

TEST_CASE("linear pullback") {
  Sampler s(17);
  ExteriorForm w = rand_form(s, 2, 2);
  CHECK(pullback_linear(mat_identity(2), w) == w);

  RatMat d{{2, 0}, {0, 3}};
  ExteriorForm vol = ExteriorForm::volume(2);
  CHECK(pullback_linear(d, vol) == vol.scaled(6));

  for (int i = 0; i < 60; ++i) {
    int n1 = (int)s.uniform_int(1, 4), n2 = (int)s.uniform_int(1, 4),
        n3 = (int)s.uniform_int(1, 4);
    ExteriorForm a = rand_form(s, n1, (int)s.uniform_int(0, 2));
    RatMat l(n1, RatVec(n2)), m(n2, RatVec(n3));
    for (auto& row : l)
      for (auto& v : row) v = s.rational(3, 2);
    for (auto& row : m)
      for (auto& v : row) v = s.rational(3, 2);
    CHECK(pullback_linear(mat_mul(l, m), a) == pullback_linear(m, pullback_linear(l, a)));
    // algebra homomorphism
    ExteriorForm b = rand_form(s, n1, (int)s.uniform_int(0, 2));
    CHECK(pullback_linear(l, wedge(a, b)) ==
          wedge(pullback_linear(l, a), pullback_linear(l, b)));
  }
  RatMat wrong(3, RatVec(2, 0));
  CHECK_THROWS_AS(pullback_linear(wrong, w), CalcError);
}

TEST_CASE("covector views agree") {
  RatVec y{Rational(2), Rational(-1, 3), Rational(0)};
  ExteriorForm w = ExteriorForm::covector(y);
  CHECK(w.covector_components() == y);
  Sampler s(19);
  RatVec xi = s.vector(3, 4, 2);
  std::vector<RatVec> arg{xi};
  CHECK(w.evaluate(arg) == dot(xi, y));
}

#include <benchmark/benchmark.h>

#include "tdscalc/plaque_forms.hpp"
#include "tdscalc/spaces.hpp"

using namespace tdsc;

namespace {

PolyExpr make_poly(Sampler& s, int vars, int deg, int terms) {
  PolyExpr p(vars);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(vars, 0);
    int budget = deg;
    for (int v = 0; v < vars; ++v) {
      e[v] = (int)s.uniform_int(0, budget);
      budget -= e[v];
    }
    p.add_term(e, s.rational(5, 2));
  }
  return p;
}

DifferentialForm make_form(Sampler& s, int dim, int k) {
  DifferentialForm f(Box::whole(dim), k);
  for (const auto& idx : MultiIndex::all(dim, k)) f.add_coeff(idx, make_poly(s, dim, 2, 3));
  return f;
}

}  // namespace

static void SmoothPullback(benchmark::State& state) {
  Sampler s(8);
  int dim = (int)state.range(0);
  DifferentialForm w = make_form(s, dim, 2);
  std::vector<PolyExpr> comps;
  for (int i = 0; i < dim; ++i) comps.push_back(make_poly(s, dim, 2, 3));
  SmoothMap f(Box::whole(dim), comps);
  for (auto _ : state) {
    DifferentialForm g = pullback_smooth(f, w);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(SmoothPullback)->DenseRange(2, 4);

static void ExteriorDerivative(benchmark::State& state) {
  Sampler s(9);
  int dim = (int)state.range(0);
  DifferentialForm w = make_form(s, dim, 2);
  for (auto _ : state) {
    DifferentialForm d = exterior_derivative(w);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(ExteriorDerivative)->DenseRange(2, 5);

static void PsiRoundtrip(benchmark::State& state) {
  Sampler s(10);
  DiffSpace x = make_euclidean(3);
  PointwiseForm omega = PointwiseForm::from_differential(make_form(s, 3, 2));
  PlaqueIndexedForm big = psi(x, omega);
  RatVec f = s.vector(3, 3, 2);
  std::vector<RatVec> dirs{s.vector(3, 3, 2), s.vector(3, 3, 2)};
  for (auto _ : state) {
    Rational v = psi_inverse_at(x, big, f, dirs);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(PsiRoundtrip);

static void JointPlaqueProbe(benchmark::State& state) {
  DiffSpace x = make_euclidean(2);
  RatMat c1(2, RatVec(1));
  c1[0][0] = 1;
  RatMat c2(2, RatVec(1));
  c2[1][0] = 1;
  SmoothMap p1 = SmoothMap::linear(c1, {1, 2});
  SmoothMap p2 = SmoothMap::linear(c2, {1, 2});
  for (auto _ : state) {
    ProbeResult r = joint_plaque_probe(x, p1, p2, JointMode::Strong, 8);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(JointPlaqueProbe);

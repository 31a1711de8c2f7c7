#include <benchmark/benchmark.h>

#include "tdscalc/exterior.hpp"
#include "tdscalc/rng.hpp"

using namespace tdsc;

namespace {

ExteriorForm dense_form(Sampler& s, int dim, int k) {
  ExteriorForm f(dim, k);
  for (const auto& idx : MultiIndex::all(dim, k)) f.add_coeff(idx, s.nonzero_rational(6, 3));
  return f;
}

}  // namespace

static void WedgeMerge(benchmark::State& state) {
  Sampler s(5);
  int dim = (int)state.range(0);
  ExteriorForm a = dense_form(s, dim, 2);
  ExteriorForm b = dense_form(s, dim, 2);
  for (auto _ : state) {
    ExteriorForm c = wedge(a, b);
    benchmark::DoNotOptimize(c);
  }
  state.SetComplexityN(dim);
}
BENCHMARK(WedgeMerge)->DenseRange(4, 8)->Complexity();

static void EvaluateForm(benchmark::State& state) {
  Sampler s(6);
  int dim = (int)state.range(0);
  ExteriorForm f = dense_form(s, dim, 3);
  std::vector<RatVec> vs;
  for (int i = 0; i < 3; ++i) vs.push_back(s.vector(dim, 5, 3));
  for (auto _ : state) {
    Rational v = f.evaluate(vs);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(EvaluateForm)->DenseRange(3, 6);

static void LinearPullback(benchmark::State& state) {
  Sampler s(7);
  int dim = (int)state.range(0);
  ExteriorForm f = dense_form(s, dim, 2);
  RatMat l(dim, RatVec(dim));
  for (auto& row : l)
    for (auto& v : row) v = s.rational(4, 2);
  for (auto _ : state) {
    ExteriorForm g = pullback_linear(l, f);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(LinearPullback)->DenseRange(3, 6);

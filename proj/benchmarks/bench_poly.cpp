#include <benchmark/benchmark.h>

#include "tdscalc/rng.hpp"
#include "tdscalc/smooth_map.hpp"

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
    p.add_term(e, s.rational(6, 3));
  }
  return p;
}

}  // namespace

static void PolyMultiply(benchmark::State& state) {
  Sampler s(1);
  int terms = (int)state.range(0);
  PolyExpr a = make_poly(s, 3, 4, terms);
  PolyExpr b = make_poly(s, 3, 4, terms);
  for (auto _ : state) {
    PolyExpr c = a * b;
    benchmark::DoNotOptimize(c);
  }
  state.SetComplexityN(terms);
}
BENCHMARK(PolyMultiply)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void PolyCompose(benchmark::State& state) {
  Sampler s(2);
  int deg = (int)state.range(0);
  SmoothMap g(Box::whole(2), {make_poly(s, 2, deg, 4), make_poly(s, 2, deg, 4)});
  SmoothMap f(Box::whole(2), {make_poly(s, 2, 2, 4), make_poly(s, 2, 2, 4)});
  for (auto _ : state) {
    SmoothMap c = compose(f, g);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(PolyCompose)->DenseRange(1, 4);

static void PolyEval(benchmark::State& state) {
  Sampler s(3);
  PolyExpr p = make_poly(s, 4, 5, (int)state.range(0));
  RatVec x = s.vector(4, 5, 3);
  for (auto _ : state) {
    Rational v = p.eval(x);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(PolyEval)->RangeMultiplier(4)->Range(4, 64);

static void ParsePrintRoundtrip(benchmark::State& state) {
  Sampler s(4);
  PolyExpr p = make_poly(s, 3, 4, 12);
  std::string text = p.to_string();
  for (auto _ : state) {
    PolyExpr q = parse_poly(text, 3);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(ParsePrintRoundtrip);

BENCHMARK_MAIN();

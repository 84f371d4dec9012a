#include <benchmark/benchmark.h>

#include <cmath>

#include "tvlab/integrator.hpp"
#include "tvlab/linear_solve.hpp"

using namespace tvlab;

namespace {

Grid grid_for(const benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  return st.range(1) == 2 ? Grid(1.0, 1.0, n, n) : Grid(1.0, n);
}

ScalarField wavy(const Grid& g) {
  return ScalarField::sample(g, [](double x, double y) {
    return std::cos(3.1 * x) + 0.3 * std::cos(6.2 * x) * std::cos(3.1 * y);
  });
}

void BM_Gradient(benchmark::State& st) {
  const ScalarField f = wavy(grid_for(st));
  for (auto _ : st) benchmark::DoNotOptimize(gradient(f));
  st.SetItemsProcessed(st.iterations() * f.size());
}

void BM_Laplacian(benchmark::State& st) {
  const ScalarField f = wavy(grid_for(st));
  for (auto _ : st) benchmark::DoNotOptimize(laplacian_neumann(f));
  st.SetItemsProcessed(st.iterations() * f.size());
}

void BM_WeightedDissipation(benchmark::State& st) {
  const ScalarField f = wavy(grid_for(st));
  for (auto _ : st) benchmark::DoNotOptimize(weighted_dissipation(f, 3.0));
  st.SetItemsProcessed(st.iterations() * f.size());
}

void BM_ImplicitSolve(benchmark::State& st) {
  const Grid g = grid_for(st);
  const ScalarField b = wavy(g);
  const FaceCoefficients faces = FaceCoefficients::uniform(g, 1.0);
  std::vector<double> x;
  for (auto _ : st) {
    x.assign(g.size(), 0.0);
    benchmark::DoNotOptimize(solve_implicit_diffusion(faces, 1e-2, b.values, x));
  }
  st.SetItemsProcessed(st.iterations() * b.size());
}

void BM_Step(benchmark::State& st) {
  const Grid g = grid_for(st);
  const CoefficientSpec spec(Polynomial({1, 0.5}), Polynomial::constant(1.0),
                             std::vector<Polynomial>(g.dim(), Polynomial({0, 0.01})),
                             std::vector<Polynomial>(g.dim(), Polynomial({0, 0.01})));
  ModelParams p;
  p.a = 0.05;
  p.n = g.dim();
  p.p = g.dim() == 2 ? 3.0 : 2.0;
  p.theta_star = 1.0;
  const ScalarField w = wavy(g);
  ScalarField th(g);
  for (std::size_t k = 0; k < g.size(); ++k) th[k] = 1.0 + 0.01 * w[k];
  const SimState s(w, w, th);
  const Scheme scheme = st.range(2) ? Scheme::imex2 : Scheme::imex1;
  for (auto _ : st) benchmark::DoNotOptimize(step(s, 1e-2, spec, p, scheme));
  st.SetItemsProcessed(st.iterations() * g.size());
}

}  // namespace

BENCHMARK(BM_Gradient)->Args({256, 1})->Args({4096, 1})->Args({128, 2});
BENCHMARK(BM_Laplacian)->Args({256, 1})->Args({4096, 1})->Args({128, 2});
BENCHMARK(BM_WeightedDissipation)->Args({256, 1})->Args({4096, 1})->Args({128, 2});
BENCHMARK(BM_ImplicitSolve)->Args({256, 1})->Args({4096, 1})->Args({128, 2});
BENCHMARK(BM_Step)->Args({256, 1, 0})->Args({256, 1, 1})->Args({64, 2, 1});
BENCHMARK_MAIN();

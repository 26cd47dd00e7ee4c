#include <benchmark/benchmark.h>

#include "arks/cosine_transform.hpp"
#include "arks/elliptic.hpp"
#include "arks/initial_data.hpp"
#include "arks/stepper.hpp"

using namespace arks;

namespace {

Field ramp(const GridPtr& g) {
  return Field::sample(g, [](double x, double y) { return 1.0 + x * (1.0 - y); });
}

void BM_CosineTransform(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = share(Grid::rectangle(1, 1, n, n));
  CosineTransform tr(*g);
  auto data = ramp(g).values;
  for (auto _ : st) {
    tr.forward(data);
    tr.inverse(data);
    benchmark::DoNotOptimize(data.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g->size()));
}
BENCHMARK(BM_CosineTransform)->Arg(64)->Arg(128)->Arg(256);

void BM_Helmholtz(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto method = static_cast<EllipticMethod>(st.range(1));
  const auto g = share(Grid::rectangle(1, 1, n, n));
  HelmholtzSolver solver(g, method);
  const auto u = ramp(g);
  for (auto _ : st) benchmark::DoNotOptimize(solver.solve(1.0, 1.0, u));
}
BENCHMARK(BM_Helmholtz)
    ->ArgsProduct({{64, 128}, {static_cast<long>(EllipticMethod::SpectralCosine),
                               static_cast<long>(EllipticMethod::ConjugateGradient)}})
    ->Unit(benchmark::kMicrosecond);

void BM_RadialTridiagonal(benchmark::State& st) {
  const auto g = share(Grid::radial_ball(1.0, static_cast<int>(st.range(0))));
  HelmholtzSolver solver(g, EllipticMethod::Tridiagonal);
  const auto u = ramp(g);
  for (auto _ : st) benchmark::DoNotOptimize(solver.solve(1.0, 1.0, u));
}
BENCHMARK(BM_RadialTridiagonal)->Arg(256)->Arg(4096);

void BM_Step(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = share(Grid::rectangle(1, 1, n, n));
  ModelParams p{.chi = 1, .xi = 2, .tau = static_cast<int>(st.range(1))};
  const auto u0 = mollify_measure({.atoms = {{{0.5, 0.5}, 10.0}}}, 1e-2, g);
  Stepper stepper(p, g, {});
  auto [v, w] = p.tau == 0 ? stepper.elliptic_chemicals(u0) : std::pair{Field(g, 0.0), Field(g, 0.0)};
  const auto s = make_state(0.0, u0, v, w, p);
  for (auto _ : st) benchmark::DoNotOptimize(stepper.step(s, 1e-5));
}
BENCHMARK(BM_Step)->ArgsProduct({{64, 128}, {0, 1}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

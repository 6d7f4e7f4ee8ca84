#include <benchmark/benchmark.h>

#include <random>

#include "specloc/specloc.hpp"

using namespace specloc;

namespace {

CMatrix random_hermitian(Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return (m + m.adjoint()) / 2.0;
}

void BM_DenseInertia(benchmark::State& state) {
  const CMatrix H = random_hermitian(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(inertia(H, 0.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DenseInertia)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNCubed);

void BM_EigenInertia(benchmark::State& state) {
  const CMatrix H = random_hermitian(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(eigen_inertia(H, 0.0));
}
BENCHMARK(BM_EigenInertia)->RangeMultiplier(2)->Range(64, 512);

// Localizer for the shift model at κ = 1/18 and radius ρ (d = 1).
void BM_BuildLocalizer1D(benchmark::State& state) {
  const auto rep = build_clifford(1);
  const auto op = shift_model(1);
  const auto ball = build_ball(1, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_localizer(op, rep, ball, 1.0 / 18.0));
}
BENCHMARK(BM_BuildLocalizer1D)->Arg(36)->Arg(144)->Arg(576);

void BM_BuildLocalizer3D(benchmark::State& state) {
  const auto rep = build_clifford(3);
  const auto op = chiral_3d_model(2.0);
  const auto ball = build_ball(3, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_localizer(op, rep, ball, 0.2));
  state.counters["dim"] = static_cast<double>(2 * ball.size() * 4);
}
BENCHMARK(BM_BuildLocalizer3D)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

// Dense vs structured factorization on the same 3D localizer.
void BM_LocalizerInertia3D(benchmark::State& state) {
  const auto rep = build_clifford(3);
  const auto L = build_localizer(chiral_3d_model(2.0), rep, build_ball(3, 5.0), 0.2);
  const Index dense_limit = state.range(0) ? L.dimension() : 0;
  for (auto _ : state) benchmark::DoNotOptimize(localizer_inertia(L, 0.0, dense_limit));
  state.SetLabel(state.range(0) ? "dense" : "structured");
  state.counters["dim"] = static_cast<double>(L.dimension());
}
BENCHMARK(BM_LocalizerInertia3D)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Pfaffian(benchmark::State& state) {
  const Index n = state.range(0);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  RMatrix K(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) K(i, j) = g(rng);
  K = (K - K.transpose()).eval();
  for (auto _ : state) benchmark::DoNotOptimize(pfaffian(K));
}
BENCHMARK(BM_Pfaffian)->RangeMultiplier(2)->Range(64, 512);

void BM_ShiftInvariantAuto(benchmark::State& state) {
  const auto rep = build_clifford(1);
  const auto op = shift_model(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_invariant(op, rep, InvariantOptions{}));
}
BENCHMARK(BM_ShiftInvariantAuto)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

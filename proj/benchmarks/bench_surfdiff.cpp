#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "surfdiff/cell_solver.hpp"
#include "surfdiff/gaussian_field.hpp"
#include "surfdiff/geometry.hpp"
#include "surfdiff/mesh.hpp"
#include "surfdiff/poisson_field.hpp"
#include "surfdiff/rng.hpp"
#include "surfdiff/sde.hpp"

namespace {

using namespace surfdiff;

const PoissonField& protrusion_surface() {
  static const PoissonField field({0.5, 1.0, 20.0}, 1);
  return field;
}

const GaussianField& gaussian_surface() {
  static const GaussianField field({0.1, 1024, 10.0, 1e-3}, 1);
  return field;
}

std::vector<Vec2> scattered_points(double cell, std::size_t count) {
  SplitMix gen{7};
  std::vector<Vec2> points(count);
  for (Vec2& p : points) p = {cell * gen.next_u01(), cell * gen.next_u01()};
  return points;
}

void BM_PoissonJet(benchmark::State& state) {
  const auto& field = protrusion_surface();
  const auto points = scattered_points(field.period(), 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field.jet(points[i++ & 1023]));
  }
}
BENCHMARK(BM_PoissonJet);

void BM_GaussianJet(benchmark::State& state) {
  const auto& field = gaussian_surface();
  const auto points = scattered_points(field.period(), 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field.jet(points[i++ & 1023]));
  }
}
BENCHMARK(BM_GaussianJet);

void BM_DriftAndNoiseScale(benchmark::State& state) {
  const auto& field = protrusion_surface();
  const auto points = scattered_points(field.period(), 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    const Vec2 p = points[i++ & 1023];
    benchmark::DoNotOptimize(drift_at(field, p));
    benchmark::DoNotOptimize(diffusion_sqrt_at(field, p));
  }
}
BENCHMARK(BM_DriftAndNoiseScale);

void BM_Assemble(benchmark::State& state) {
  const auto& field = protrusion_surface();
  const PeriodicMesh mesh(field.period(), static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(field, mesh));
  }
}
BENCHMARK(BM_Assemble)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_SolveCorrectors(benchmark::State& state) {
  const auto& field = protrusion_surface();
  const PeriodicMesh mesh(field.period(), static_cast<int>(state.range(0)));
  const AssembledSystem system = assemble(field, mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_correctors(system, mesh));
  }
}
BENCHMARK(BM_SolveCorrectors)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_EmStep(benchmark::State& state) {
  const auto& field = protrusion_surface();
  Vec2 x{0.3, 0.4};
  std::uint64_t step = 0;
  for (auto _ : state) {
    const NormalPair noise = noise_pair(9, step++);
    x = em_step(field, x, 1e-4, {noise.z0, noise.z1});
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_EmStep);

}  // namespace

BENCHMARK_MAIN();

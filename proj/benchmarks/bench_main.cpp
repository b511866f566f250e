#include <benchmark/benchmark.h>

#include "beltrami/diagnose.hpp"
#include "beltrami/gseig.hpp"
#include "beltrami/mesh.hpp"
#include "beltrami/shapes.hpp"

using namespace beltrami;

namespace {

// Range argument is 1/h.
double mesh_size(const benchmark::State& state) { return 1.0 / static_cast<double>(state.range(0)); }

void BM_TriangulateTorus(benchmark::State& state) {
  const CrossSection cs = CrossSection::make(shapes::circle({2, 0}, 0.5, 512));
  for (auto _ : state) benchmark::DoNotOptimize(triangulate(cs, mesh_size(state)));
}
BENCHMARK(BM_TriangulateTorus)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SolveBall(benchmark::State& state) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::half_disc(1.0, 2048)), mesh_size(state));
  const GSProblem problem = assemble(mesh, Topology::ball_like);
  for (auto _ : state) benchmark::DoNotOptimize(solve_smallest(problem));
  state.counters["dofs"] = static_cast<double>(problem.num_dofs());
}
BENCHMARK(BM_SolveBall)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SolveTorus(benchmark::State& state) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::circle({2, 0}, 0.5, 512)), mesh_size(state));
  const GSProblem problem = assemble(mesh, Topology::torus_like);
  for (auto _ : state) benchmark::DoNotOptimize(solve_smallest(problem));
}
BENCHMARK(BM_SolveTorus)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_DiagnoseTorus(benchmark::State& state) {
  const TriMesh mesh = triangulate(CrossSection::make(shapes::circle({2, 0}, 0.5, 512)), mesh_size(state));
  const GSProblem problem = assemble(mesh, Topology::torus_like);
  const EigenSolution sol = solve_smallest(problem);
  for (auto _ : state) benchmark::DoNotOptimize(diagnose(problem, sol));
}
BENCHMARK(BM_DiagnoseTorus)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

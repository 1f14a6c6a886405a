#include <sketchfem/assembly.hpp>
#include <sketchfem/diagnostics.hpp>
#include <sketchfem/fields.hpp>
#include <sketchfem/mesh_builders.hpp>
#include <sketchfem/reduction.hpp>
#include <sketchfem/sketch.hpp>

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

namespace sketchfem {
namespace {

struct Problem {
  Mesh mesh;
  GradientOperator op;
  Vector forcing;
  OfflineBundle bundle;
  std::unique_ptr<OnlineSolver> solver;
  Vector p;
};

// Offline work is cached per (cells, rho) so only the measured stage repeats.
const Problem& problem(int cells, Index rho) {
  static std::map<std::pair<int, Index>, std::unique_ptr<Problem>> cache;
  auto& slot = cache[{cells, rho}];
  if (!slot) {
    Mesh mesh = meshes::cube(cells);
    GradientOperator op = gradient_operator(mesh);
    Vector f = ball_forcing(mesh);
    OfflineBundle bundle = build_offline_bundle(mesh, op, rho, f);
    Vector p = uniform_field(mesh.num_elements(), 0.1, 100.0, 5);
    slot = std::make_unique<Problem>(Problem{std::move(mesh), std::move(op), std::move(f), std::move(bundle), nullptr, std::move(p)});
    slot->solver = std::make_unique<OnlineSolver>(slot->op, slot->bundle);
  }
  return *slot;
}

void BM_OnlineQuery(benchmark::State& state) {
  const Problem& pr = problem(static_cast<int>(state.range(0)), state.range(1));
  const std::uint64_t c = plan_sample_size(state.range(1), 0.3);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(pr.solver->query(pr.p, c, ++seed));
  state.counters["n"] = static_cast<double>(pr.op.num_interior());
  state.counters["c"] = static_cast<double>(c);
}
BENCHMARK(BM_OnlineQuery)->Args({16, 20})->Args({16, 50})->Args({24, 50})->Unit(benchmark::kMillisecond);

void BM_ReferenceSolve(benchmark::State& state) {
  const Problem& pr = problem(static_cast<int>(state.range(0)), 20);
  const Vector b = assemble_load(pr.mesh, pr.forcing).b;
  for (auto _ : state) {
    const SparseMatrix a = assemble_stiffness(pr.op, scaling_vector(pr.op.volumes, pr.p));
    benchmark::DoNotOptimize(reference_solve(a, b));
  }
  state.counters["n"] = static_cast<double>(pr.op.num_interior());
}
BENCHMARK(BM_ReferenceSolve)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_OfflineBundle(benchmark::State& state) {
  const Mesh mesh = meshes::cube(static_cast<int>(state.range(0)));
  const GradientOperator op = gradient_operator(mesh);
  const Vector f = ball_forcing(mesh);
  for (auto _ : state) benchmark::DoNotOptimize(build_offline_bundle(mesh, op, state.range(1), f));
}
BENCHMARK(BM_OfflineBundle)->Args({12, 20})->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace
}  // namespace sketchfem

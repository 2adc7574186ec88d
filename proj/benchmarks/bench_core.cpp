// Microbenchmarks for the hot paths: path simulation, weight evolution,
// field estimation, the FD oracle sweep and the end-to-end fixed point.
// Throughput is reported as items/s where an item is one particle-step
// (or one grid-node update for the FD sweep).

#include <benchmark/benchmark.h>

#include <cstddef>
#include <string>
#include <vector>

#include "wpr/oracle.hpp"
#include "wpr/solver.hpp"

using namespace wpr;

namespace {

const Domain kUnit(0.0, 1.0, 1.0);

SpdeProblem make_problem(const std::string& G) {
  return SpdeProblem(kUnit, ScalarField::zero(),
                     ScalarField::parse("sin:1:1", kUnit), ScalarField::zero(),
                     Nonlinearity::parse(G),
                     {ScalarField::parse("const:0.2", kUnit)});
}

struct Fixture {
  SpdeProblem problem = make_problem("allen-cahn");
  double dt = 1e-3;
  std::size_t n_steps = 200;
  std::vector<ParticlePath> paths;
  NoiseRealization noise;
  FieldEstimate field = FieldEstimate::zero(kUnit, 201, 16);
  std::vector<WeightTrajectory> weights;

  explicit Fixture(std::size_t n_particles) {
    RngStreams streams(1);
    paths = simulate_ensemble(kUnit, streams, n_particles, dt, n_steps);
    noise = generate_noise(streams, dt, n_steps, 1);
    weights = evolve_all(paths, field, noise, problem);
  }
};

}  // namespace

static void BM_SimulateEnsemble(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  RngStreams streams(1);
  for (auto _ : state) {
    auto paths = simulate_ensemble(kUnit, streams, n, 1e-3, 200, false);
    benchmark::DoNotOptimize(paths.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) *
                          200);
}
BENCHMARK(BM_SimulateEnsemble)->Arg(256)->Arg(2048);

static void BM_EvolveWeights(benchmark::State& state) {
  Fixture fx(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto weights = evolve_all(fx.paths, fx.field, fx.noise, fx.problem);
    benchmark::DoNotOptimize(weights.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_EvolveWeights)->Arg(256)->Arg(2048);

static void BM_EstimateField(benchmark::State& state) {
  Fixture fx(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto field = estimate_field(fx.paths, fx.weights, kUnit, 16);
    benchmark::DoNotOptimize(field.values().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 201);
}
BENCHMARK(BM_EstimateField)->Arg(256)->Arg(2048);

static void BM_FdSolve(benchmark::State& state) {
  auto problem = make_problem("allen-cahn");
  RngStreams streams(1);
  auto noise = generate_noise(streams, 1e-3, 200, 1);
  const std::size_t J = static_cast<std::size_t>(state.range(0));
  std::size_t substeps = 0;
  for (auto _ : state) {
    auto sol = fd_solve(problem, noise, J);
    substeps = sol.substeps;
    benchmark::DoNotOptimize(sol.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(J) *
                          200 * static_cast<std::int64_t>(substeps));
}
BENCHMARK(BM_FdSolve)->Arg(100)->Arg(200);

static void BM_SolveFixedPoint(benchmark::State& state) {
  auto problem = make_problem("allen-cahn");
  SolverSettings s;
  s.n_particles = static_cast<std::size_t>(state.range(0));
  s.dt = 1e-3;
  s.n_steps = 100;
  s.n_bins = 8;
  s.seed = 1;
  for (auto _ : state) {
    auto art = solve(problem, s);
    benchmark::DoNotOptimize(art.field.values().data());
  }
}
BENCHMARK(BM_SolveFixedPoint)->Arg(512);

BENCHMARK_MAIN();

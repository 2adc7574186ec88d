#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wpr/field.hpp"
#include "wpr/noise.hpp"
#include "wpr/particles.hpp"
#include "wpr/problem.hpp"
#include "wpr/weights.hpp"

namespace wpr {

struct SolverSettings {
  std::size_t n_particles = 0;
  double dt = 0;
  std::size_t n_steps = 0;
  std::size_t n_bins = 0;  // 0 = round(N^(1/3))
  double tol = 1e-3;
  std::size_t max_iter = 25;
  FieldInterpolation interpolation = FieldInterpolation::PiecewiseConstant;
  bool retain_increments = true;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::uint64_t salt = 0;  // stream salt for derived runs
};

// Record of one fixed-point run. deltas[n-1] holds delta_n, the
// max-over-slices L1(pi) distance between the fields produced by
// applications n+1 and n of the estimated conditional-expectation map
// (the first application happens before the loop, so a run whose weights
// never read the field converges at iteration 1 with delta_1 == 0).
// ratios[n-1] = delta_{n+1}/delta_n tracks the contraction.
struct IterationReport {
  std::vector<double> deltas;
  std::vector<double> ratios;
  std::size_t iterations = 0;
  bool converged = false;
  double tol = 0;
  std::size_t max_iter = 0;
  std::uint64_t noise_checksum = 0;
  std::uint64_t positions_checksum = 0;
  bool randomness_frozen = false;  // checksums unchanged across iterations
  double simulate_seconds = 0;
  double iterate_seconds = 0;
};

// Everything a run produces; diagnostics operate on this.
struct SolveArtifacts {
  SolverSettings settings;
  NoiseRealization noise;
  std::vector<ParticlePath> paths;
  std::vector<WeightTrajectory> weights;
  FieldEstimate field;
  IterationReport report;
};

// Fixed-point core on pre-simulated inputs: paths and noise are frozen,
// the weight evolution and field estimation alternate until the field
// movement drops below tol or max_iter iterations pass. Non-convergence
// is reported, not thrown.
SolveArtifacts solve_fixed_point(const SpdeProblem& problem,
                                 std::vector<ParticlePath> paths,
                                 NoiseRealization noise,
                                 const SolverSettings& settings);

// Full run: draws the common noise and the particle paths from the seed,
// then runs the fixed point.
SolveArtifacts solve(const SpdeProblem& problem, const SolverSettings& settings);

// One extra application of the map against the final field:
// max-over-slices L1(pi) distance between the re-estimated field and
// artifacts.field. Zero (bit-exact) when the weights never read the field.
double self_consistency_residual(const SpdeProblem& problem,
                                 const SolveArtifacts& artifacts);

}  // namespace wpr

#include "wpr/solver.hpp"

#include <chrono>
#include <stdexcept>

namespace wpr {

namespace {

double max_l1_over_slices(const FieldEstimate& a, const FieldEstimate& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.n_slices(); ++k)
    worst = std::max(worst, l1_pi_distance(a, b, k));
  return worst;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

SolveArtifacts solve_fixed_point(const SpdeProblem& problem,
                                 std::vector<ParticlePath> paths,
                                 NoiseRealization noise,
                                 const SolverSettings& settings) {
  if (paths.empty()) throw std::invalid_argument("solve_fixed_point: no particles");
  if (noise.n_steps != paths[0].n_steps())
    throw std::invalid_argument("solve_fixed_point: path/noise grids differ");
  if (!(settings.tol > 0.0))
    throw std::invalid_argument("solve_fixed_point: tol must be positive");
  if (settings.max_iter == 0)
    throw std::invalid_argument("solve_fixed_point: max_iter must be >= 1");

  const std::size_t n_bins = settings.n_bins == 0
                                 ? default_bin_count(paths.size())
                                 : settings.n_bins;
  const std::size_t n_slices = noise.n_steps + 1;
  const Domain& domain = problem.domain();
  const std::size_t workers = settings.workers == 0 ? 1 : settings.workers;

  IterationReport report;
  report.tol = settings.tol;
  report.max_iter = settings.max_iter;
  report.noise_checksum = noise.checksum();
  report.positions_checksum = positions_checksum(paths);

  const auto t0 = std::chrono::steady_clock::now();

  // First application of the map, against the zero field.
  FieldEstimate current = FieldEstimate::zero(domain, n_slices, n_bins,
                                              settings.interpolation);
  std::vector<WeightTrajectory> weights =
      evolve_all(paths, current, noise, problem, workers);
  current = estimate_field(paths, weights, domain, n_bins,
                           settings.interpolation, workers);

  for (std::size_t n = 1; n <= settings.max_iter; ++n) {
    weights = evolve_all(paths, current, noise, problem, workers);
    FieldEstimate next = estimate_field(paths, weights, domain, n_bins,
                                        settings.interpolation, workers);
    const double delta = max_l1_over_slices(next, current);
    if (!report.deltas.empty())
      report.ratios.push_back(report.deltas.back() > 0.0
                                  ? delta / report.deltas.back()
                                  : 0.0);
    report.deltas.push_back(delta);
    report.iterations = n;
    current = std::move(next);
    if (delta < settings.tol) {
      report.converged = true;
      break;
    }
  }

  report.iterate_seconds = seconds_since(t0);
  report.randomness_frozen = noise.checksum() == report.noise_checksum &&
                             positions_checksum(paths) ==
                                 report.positions_checksum;

  SolveArtifacts artifacts{settings,
                           std::move(noise),
                           std::move(paths),
                           std::move(weights),
                           std::move(current),
                           std::move(report)};
  artifacts.settings.n_bins = n_bins;
  return artifacts;
}

SolveArtifacts solve(const SpdeProblem& problem,
                     const SolverSettings& settings) {
  if (settings.n_particles == 0)
    throw std::invalid_argument("solve: n_particles must be >= 1");
  if (!(settings.dt > 0.0) || settings.n_steps == 0)
    throw std::invalid_argument("solve: time grid is empty");

  RngStreams streams(settings.seed);
  const auto t0 = std::chrono::steady_clock::now();
  NoiseRealization noise = generate_noise(streams, settings.dt,
                                          settings.n_steps,
                                          problem.n_channels());
  std::vector<ParticlePath> paths = simulate_ensemble(
      problem.domain(), streams, settings.n_particles, settings.dt,
      settings.n_steps, settings.retain_increments,
      settings.workers == 0 ? 1 : settings.workers, settings.salt);
  const double sim_seconds = seconds_since(t0);

  SolveArtifacts artifacts =
      solve_fixed_point(problem, std::move(paths), std::move(noise), settings);
  artifacts.report.simulate_seconds = sim_seconds;
  return artifacts;
}

double self_consistency_residual(const SpdeProblem& problem,
                                 const SolveArtifacts& artifacts) {
  const std::size_t workers =
      artifacts.settings.workers == 0 ? 1 : artifacts.settings.workers;
  auto weights = evolve_all(artifacts.paths, artifacts.field, artifacts.noise,
                            problem, workers);
  FieldEstimate next = estimate_field(
      artifacts.paths, weights, problem.domain(), artifacts.field.n_bins(),
      artifacts.field.interpolation(), workers);
  return max_l1_over_slices(next, artifacts.field);
}

}  // namespace wpr

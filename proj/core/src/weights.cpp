#include "wpr/weights.hpp"

#include <cmath>

#include "wpr/hash.hpp"
#include "wpr/parallel.hpp"

namespace wpr {

namespace {
constexpr double kMaxReactionStep = 0.1;  // |G|*dt guard
}

WeightTrajectory evolve_weights(const ParticlePath& path,
                                const FieldEstimate& field,
                                const NoiseRealization& noise,
                                const SpdeProblem& problem) {
  const std::size_t n_steps = path.n_steps();
  if (noise.n_steps != n_steps)
    throw std::invalid_argument("evolve_weights: path/noise step mismatch");
  if (field.n_slices() != n_steps + 1)
    throw std::invalid_argument("evolve_weights: field slice count mismatch");
  if (problem.n_channels() != noise.n_channels)
    throw std::invalid_argument("evolve_weights: channel count mismatch");

  const double dt = noise.dt;
  const auto& rho = problem.rho();

  WeightTrajectory traj;
  traj.values.resize(n_steps + 1);

  auto hit = path.hits.begin();
  const auto hits_end = path.hits.end();

  double a = problem.h(path.positions[0]);
  if (hit != hits_end && hit->step == 0) {
    a = problem.g(hit->location);
    traj.resets.push_back(0);
    ++hit;
  }
  if (!std::isfinite(a)) throw WeightError("non-finite weight at step 0", 0);
  traj.values[0] = a;

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double x = path.positions[k];
    const double u = field.evaluate(k, x);
    const double gv = problem.G(u, x);
    if (std::abs(gv) * dt > kMaxReactionStep)
      throw WeightError(
          "reaction increment |G|*dt = " + std::to_string(std::abs(gv) * dt) +
              " exceeds 0.1 at step " + std::to_string(k) +
              "; decrease dt for the realized field",
          k);

    double noise_term = 0.0;
    for (std::size_t m = 0; m < rho.size(); ++m)
      noise_term += rho[m](x) * noise.dw(k, m);
    a = a + (gv * a + problem.b(x)) * dt + noise_term;

    if (hit != hits_end && hit->step == k + 1) {
      a = problem.g(hit->location);
      traj.resets.push_back(static_cast<std::uint32_t>(k + 1));
      ++hit;
    }
    if (!std::isfinite(a))
      throw WeightError("non-finite weight at step " + std::to_string(k + 1),
                        k + 1);
    traj.values[k + 1] = a;
  }
  return traj;
}

std::vector<WeightTrajectory> evolve_all(
    const std::vector<ParticlePath>& paths, const FieldEstimate& field,
    const NoiseRealization& noise, const SpdeProblem& problem,
    std::size_t workers) {
  std::vector<WeightTrajectory> out(paths.size());
  parallel_for(paths.size(), workers, [&](std::size_t i) {
    try {
      out[i] = evolve_weights(paths[i], field, noise, problem);
    } catch (const WeightError& e) {
      throw WeightError("particle " + std::to_string(i) + ": " + e.what(),
                        e.step);
    }
  });
  return out;
}

std::uint64_t weights_checksum(const std::vector<WeightTrajectory>& weights) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& w : weights) h = fnv1a(w.values, h);
  return h;
}

}  // namespace wpr

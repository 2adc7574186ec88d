#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpr/field.hpp"
#include "wpr/noise.hpp"
#include "wpr/particles.hpp"
#include "wpr/problem.hpp"

namespace wpr {

// Weight trajectory of one particle. resets lists the steps at which the
// value was pinned to the boundary datum (one entry per recorded hit).
struct WeightTrajectory {
  std::vector<double> values;       // n_steps + 1
  std::vector<std::uint32_t> resets;
};

// Weight evolution failed at a specific step.
struct WeightError : std::runtime_error {
  WeightError(const std::string& what, std::size_t at_step)
      : std::runtime_error(what), step(at_step) {}
  std::size_t step;
};

// Explicit Euler for the weight equation along one stored path:
//   A[0] = h(X[0]);
//   at every step with a recorded hit, A is first pinned to g(hit
//   location) (reset-then-step, so A equals the boundary datum at the hit
//   step itself);
//   A[k+1] = A[k] + (G(U(t_k, X[k]), X[k]) * A[k] + b(X[k])) * dt
//                 + sum_m rho_m(X[k]) * dW[k][m],
// with U read from `field` (slice k, configured interpolation).
//
// Guards: |G|*dt <= 0.1 at every evaluation (larger values mean the
// explicit step cannot follow the realized field and the run must use a
// smaller dt); any non-finite stored value aborts. Both throw WeightError
// naming the step.
WeightTrajectory evolve_weights(const ParticlePath& path,
                                const FieldEstimate& field,
                                const NoiseRealization& noise,
                                const SpdeProblem& problem);

// Evolves every particle against the same field and noise. Results are
// written per particle, so the outcome is worker-count independent.
std::vector<WeightTrajectory> evolve_all(
    const std::vector<ParticlePath>& paths, const FieldEstimate& field,
    const NoiseRealization& noise, const SpdeProblem& problem,
    std::size_t workers = 1);

std::uint64_t weights_checksum(const std::vector<WeightTrajectory>& weights);

}  // namespace wpr

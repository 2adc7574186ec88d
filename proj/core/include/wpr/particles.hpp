#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "wpr/domain.hpp"
#include "wpr/rng.hpp"

namespace wpr {

// Boundary contact of one path. At most one hit is recorded per step
// index. local_time is the folding overshoot |y - fold(y)| for steps the
// reflection map displaced; bridge-detected hits carry zero local time.
struct HitEvent {
  std::size_t step;
  int face;          // 0 = lower, 1 = upper
  double location;   // exactly on the face
  double local_time;
};

// One reflected trajectory on the grid t_k = k*dt. positions has
// n_steps+1 entries; increments (the particle's own Brownian increments,
// before the sigma scaling) has n_steps entries when retained.
struct ParticlePath {
  std::vector<double> positions;
  std::vector<double> increments;
  std::vector<HitEvent> hits;  // ascending step order

  std::size_t n_steps() const { return positions.empty() ? 0 : positions.size() - 1; }

  // Accumulated local time on `face` over steps <= k.
  double local_time(int face, std::size_t k) const;

  struct LastHit {
    bool from_initial;  // true: no hit at or before k, weight flows from h
    std::size_t step;
    double location;
  };
  // Most recent recorded hit at or before step k ("closed at the hit":
  // a hit at k is already visible at k). Returns the initial flag if the
  // path has not touched the boundary yet.
  LastHit tau(std::size_t k) const;
};

// Reflected Euler walk started at x0 (which must lie in the closed
// domain; a start exactly on a face counts as a hit at step 0). Each step
// draws one standard normal Z, proposes y = x + sigma*sqrt(dt)*Z, folds y
// back into the domain, and records a hit when the fold displaced the
// point, the endpoint landed exactly on a face, or a Brownian-bridge coin
// (one uniform draw, fired with the per-face crossing probability)
// detects a between-grid excursion. Bridge hits are attributed to the
// face nearest the endpoint, at step k+1.
ParticlePath simulate_path(const Domain& domain, double x0,
                           std::mt19937_64& rng, double dt,
                           std::size_t n_steps, bool retain_increments = true);

// Same walk with prescribed Brownian increments (used by step-refinement
// probes and tests); bridge coins still come from rng.
ParticlePath simulate_path_with_increments(const Domain& domain, double x0,
                                           std::span<const double> increments,
                                           std::mt19937_64& rng, double dt,
                                           bool retain_increments = true);

// Independent paths i = 0..n-1, each driven by streams.particle(i, salt)
// with the initial position drawn first (stationary start). Particle i's
// path is identical for any ensemble size >= i+1.
std::vector<ParticlePath> simulate_ensemble(const Domain& domain,
                                            const RngStreams& streams,
                                            std::size_t n_particles,
                                            double dt, std::size_t n_steps,
                                            bool retain_increments = true,
                                            std::size_t workers = 1,
                                            std::uint64_t salt = 0);

// Checksum over all positions (paths in index order), for the frozen-
// randomness contract.
std::uint64_t positions_checksum(const std::vector<ParticlePath>& paths);

}  // namespace wpr

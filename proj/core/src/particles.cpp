#include "wpr/particles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wpr/hash.hpp"
#include "wpr/parallel.hpp"

namespace wpr {

double ParticlePath::local_time(int face, std::size_t k) const {
  double sum = 0.0;
  for (const auto& h : hits) {
    if (h.step > k) break;
    if (h.face == face) sum += h.local_time;
  }
  return sum;
}

ParticlePath::LastHit ParticlePath::tau(std::size_t k) const {
  // hits is ascending in step; find the last event with step <= k.
  auto it = std::upper_bound(
      hits.begin(), hits.end(), k,
      [](std::size_t value, const HitEvent& h) { return value < h.step; });
  if (it == hits.begin()) return {true, 0, 0.0};
  --it;
  return {false, it->step, it->location};
}

namespace {

// One reflected Euler step from x with total displacement dx. Starting on
// a face is allowed; the proposal simply moves off (or folds back).
struct StepResult {
  double position;
  bool hit;
  int face;
  double local_time;
};

inline StepResult reflect_step(const Domain& domain, double x, double dx) {
  const double y = x + dx;
  if (y > domain.lower() && y < domain.upper())
    return {y, false, -1, 0.0};
  if (y == domain.lower() || y == domain.upper())
    return {y, true, domain.face_of(y), 0.0};
  const int face = y < domain.lower() ? 0 : 1;
  const double folded = domain.fold(y);
  return {folded, true, face, std::abs(y - folded)};
}

template <typename IncrementSource>
ParticlePath walk(const Domain& domain, double x0, IncrementSource&& next_db,
                  std::mt19937_64& rng, double dt, std::size_t n_steps,
                  bool retain_increments) {
  if (!domain.contains(x0))
    throw std::invalid_argument("simulate_path: x0 must lie in the closed domain");
  if (!(dt > 0.0))
    throw std::invalid_argument("simulate_path: dt must be positive");

  ParticlePath path;
  path.positions.reserve(n_steps + 1);
  if (retain_increments) path.increments.reserve(n_steps);
  path.positions.push_back(x0);
  if (domain.on_face(x0)) path.hits.push_back({0, domain.face_of(x0), x0, 0.0});

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double sigma = domain.sigma();
  double x = x0;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double db = next_db();
    if (retain_increments) path.increments.push_back(db);

    const StepResult s = reflect_step(domain, x, sigma * db);
    if (s.hit) {
      const int face = s.face;
      path.hits.push_back({k + 1, face, domain.face_location(face), s.local_time});
    } else {
      const auto p = domain.bridge_hit_prob(x, s.position, dt, sigma);
      if (coin(rng) < p.any()) {
        const int face = domain.dist_to_boundary(s.position).face;
        path.hits.push_back({k + 1, face, domain.face_location(face), 0.0});
      }
    }
    x = s.position;
    path.positions.push_back(x);
  }
  return path;
}

}  // namespace

ParticlePath simulate_path(const Domain& domain, double x0,
                           std::mt19937_64& rng, double dt,
                           std::size_t n_steps, bool retain_increments) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sd = std::sqrt(dt);
  auto next_db = [&]() { return sd * gauss(rng); };
  return walk(domain, x0, next_db, rng, dt, n_steps, retain_increments);
}

ParticlePath simulate_path_with_increments(const Domain& domain, double x0,
                                           std::span<const double> increments,
                                           std::mt19937_64& rng, double dt,
                                           bool retain_increments) {
  std::size_t k = 0;
  auto next_db = [&]() { return increments[k++]; };
  return walk(domain, x0, next_db, rng, dt, increments.size(),
              retain_increments);
}

std::vector<ParticlePath> simulate_ensemble(const Domain& domain,
                                            const RngStreams& streams,
                                            std::size_t n_particles,
                                            double dt, std::size_t n_steps,
                                            bool retain_increments,
                                            std::size_t workers,
                                            std::uint64_t salt) {
  std::vector<ParticlePath> paths(n_particles);
  parallel_for(n_particles, workers, [&](std::size_t i) {
    auto rng = streams.particle(i, salt);
    const double x0 = domain.sample_stationary(rng);
    paths[i] = simulate_path(domain, x0, rng, dt, n_steps, retain_increments);
  });
  return paths;
}

std::uint64_t positions_checksum(const std::vector<ParticlePath>& paths) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& p : paths) h = fnv1a(p.positions, h);
  return h;
}

}  // namespace wpr

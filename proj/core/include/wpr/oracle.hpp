#pragma once

#include <cstddef>
#include <vector>

#include "wpr/field.hpp"
#include "wpr/noise.hpp"
#include "wpr/problem.hpp"

namespace wpr {

// Finite-difference solution on the noise time grid. values holds
// (n_steps+1) rows of (n_points) nodal values; xs are the node
// coordinates. substeps deterministic sub-iterations are taken per noise
// step, and cfl records sigma^2 * dt_sub / dx^2 for the substep actually
// used (always <= 0.5).
struct GridSolution {
  double dx = 0;
  double dt = 0;            // noise step
  std::size_t n_steps = 0;  // noise steps
  std::size_t substeps = 1;
  double cfl = 0;
  std::vector<double> xs;
  std::vector<double> values;

  std::size_t n_points() const { return xs.size(); }
  double value(std::size_t k, std::size_t j) const {
    return values[k * xs.size() + j];
  }
  double& value_ref(std::size_t k, std::size_t j) {
    return values[k * xs.size() + j];
  }

  // Average of the piecewise-linear nodal interpolant over [a, b].
  double segment_average(std::size_t k, double a, double b) const;
};

// Explicit scheme for the field equation driven by the same noise the
// particles see:
//   u <- u + dt_sub * (0.5*sigma^2 * Lap_h u + G(u, x) u + b(x))
// repeated `substeps` times per noise step, then u += sum_m rho_m(x) dW[k][m]
// on interior nodes. Rows k >= 1 are pinned to the boundary datum g at
// both ends; row 0 is the initial density h. substeps == 0 picks the
// smallest count with substep CFL <= 0.5; an explicit substep count that
// violates CFL <= 0.5 is rejected at construction.
GridSolution fd_solve(const SpdeProblem& problem, const NoiseRealization& noise,
                      std::size_t n_intervals, std::size_t substeps = 0);

// L1 distance in the stationary measure between a particle field slice
// and the FD solution at the same time index, comparing each bin value
// against the FD bin average.
double l1_pi_distance(const FieldEstimate& field, const GridSolution& grid,
                      std::size_t k);

struct SeriesEval {
  double value = 0;
  double tail_bound = 0;    // bound on the truncated remainder
  bool gibbs_risk = false;  // t == 0 with h not matching g at a face
};

// Deterministic reference for the noiseless linear problem (G == 0,
// b == 0, rho == 0): heat flow with constant Dirichlet data g at the
// faces. Value is the harmonic lift of the face data plus n_terms sine
// modes of h minus the lift, with mode n decaying like
// exp(-0.5*sigma^2*(n*pi/width)^2 * t). Coefficients come from composite
// Simpson quadrature on a fine grid.
SeriesEval series_reference(const ScalarField& h, const ScalarField& g,
                            const Domain& domain, double t, double x,
                            std::size_t n_terms);

}  // namespace wpr

#include "wpr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wpr {

double GridSolution::segment_average(std::size_t k, double a, double b) const {
  if (!(b > a)) throw std::invalid_argument("segment_average: empty segment");
  const std::size_t n = xs.size();
  const double lo = xs.front(), hi = xs.back();
  a = std::max(a, lo);
  b = std::min(b, hi);
  if (!(b > a))
    throw std::invalid_argument("segment_average: segment outside the grid");

  // Integrate the piecewise-linear interpolant exactly, cell by cell.
  auto interp = [&](double x, std::size_t j) {
    const double w = (x - xs[j]) / dx;
    return (1.0 - w) * value(k, j) + w * value(k, j + 1);
  };
  std::size_t j = std::min<std::size_t>(
      static_cast<std::size_t>(std::max((a - lo) / dx, 0.0)), n - 2);
  double integral = 0.0;
  double left = a;
  while (left < b) {
    while (j + 2 < n && xs[j + 1] <= left) ++j;
    const double right = std::min(b, xs[j + 1]);
    integral += 0.5 * (interp(left, j) + interp(right, j)) * (right - left);
    if (right <= left) break;  // guards rounding stalls at the last node
    left = right;
  }
  return integral / (b - a);
}

GridSolution fd_solve(const SpdeProblem& problem, const NoiseRealization& noise,
                      std::size_t n_intervals, std::size_t substeps) {
  if (n_intervals < 2)
    throw std::invalid_argument("fd_solve: need at least 2 grid intervals");
  if (problem.n_channels() != noise.n_channels)
    throw std::invalid_argument("fd_solve: channel count mismatch");

  const Domain& d = problem.domain();
  const double sigma = d.sigma();
  const double dx = d.width() / static_cast<double>(n_intervals);
  const double diffusion_cfl = sigma * sigma * noise.dt / (dx * dx);

  std::size_t n_sub = substeps;
  if (n_sub == 0)
    n_sub = std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::ceil(diffusion_cfl / 0.5)));
  const double dt_sub = noise.dt / static_cast<double>(n_sub);
  const double cfl_sub = sigma * sigma * dt_sub / (dx * dx);
  if (cfl_sub > 0.5 + 1e-12)
    throw std::invalid_argument(
        "fd_solve: substep CFL " + std::to_string(cfl_sub) +
        " exceeds 0.5; increase substeps or coarsen the grid");

  const std::size_t J = n_intervals;
  GridSolution sol;
  sol.dx = dx;
  sol.dt = noise.dt;
  sol.n_steps = noise.n_steps;
  sol.substeps = n_sub;
  sol.cfl = cfl_sub;
  sol.xs.resize(J + 1);
  for (std::size_t j = 0; j <= J; ++j)
    sol.xs[j] = d.lower() + dx * static_cast<double>(j);
  sol.xs[J] = d.upper();
  sol.values.resize((noise.n_steps + 1) * (J + 1));

  const double g_lo = problem.g(d.lower());
  const double g_hi = problem.g(d.upper());
  const double lam = 0.5 * sigma * sigma / (dx * dx);

  std::vector<double> u(J + 1), next(J + 1);
  for (std::size_t j = 0; j <= J; ++j) {
    u[j] = problem.h(sol.xs[j]);
    sol.value_ref(0, j) = u[j];
  }

  // Channel shapes sampled once per node.
  const auto& rho = problem.rho();
  std::vector<double> rho_at(rho.size() * (J + 1));
  for (std::size_t m = 0; m < rho.size(); ++m)
    for (std::size_t j = 0; j <= J; ++j)
      rho_at[m * (J + 1) + j] = rho[m](sol.xs[j]);
  std::vector<double> b_at(J + 1);
  for (std::size_t j = 0; j <= J; ++j) b_at[j] = problem.b(sol.xs[j]);

  for (std::size_t k = 0; k < noise.n_steps; ++k) {
    for (std::size_t s = 0; s < n_sub; ++s) {
      next[0] = g_lo;
      next[J] = g_hi;
      for (std::size_t j = 1; j < J; ++j) {
        const double lap = u[j - 1] - 2.0 * u[j] + u[j + 1];
        const double reaction = problem.G(u[j], sol.xs[j]) * u[j];
        next[j] = u[j] + dt_sub * (lam * lap + reaction + b_at[j]);
      }
      u.swap(next);
    }
    for (std::size_t m = 0; m < rho.size(); ++m) {
      const double w = noise.dw(k, m);
      const double* shape = &rho_at[m * (J + 1)];
      for (std::size_t j = 1; j < J; ++j) u[j] += shape[j] * w;
    }
    u[0] = g_lo;
    u[J] = g_hi;
    bool finite = true;
    for (std::size_t j = 0; j <= J; ++j) {
      sol.value_ref(k + 1, j) = u[j];
      finite = finite && std::isfinite(u[j]);
    }
    if (!finite)
      throw std::runtime_error("fd_solve: solution blew up at step " +
                               std::to_string(k + 1));
  }
  return sol;
}

double l1_pi_distance(const FieldEstimate& field, const GridSolution& grid,
                      std::size_t k) {
  if (k >= field.n_slices() || k > grid.n_steps)
    throw std::invalid_argument("l1_pi_distance: slice out of range");
  double sum = 0.0;
  const double w = field.bin_width();
  for (std::size_t j = 0; j < field.n_bins(); ++j) {
    const double a = field.domain().lower() + w * static_cast<double>(j);
    const double avg = grid.segment_average(k, a, a + w);
    sum += std::abs(field.value(k, j) - avg);
  }
  return sum * field.pi_bin();
}

SeriesEval series_reference(const ScalarField& h, const ScalarField& g,
                            const Domain& domain, double t, double x,
                            std::size_t n_terms) {
  if (!domain.contains(x))
    throw std::invalid_argument("series_reference: x outside the domain");
  if (t < 0.0) throw std::invalid_argument("series_reference: negative time");
  if (n_terms == 0) throw std::invalid_argument("series_reference: n_terms must be >= 1");

  const double w = domain.width();
  const double lo = domain.lower();
  const double g_lo = g(lo), g_hi = g(domain.upper());
  auto lift = [&](double y) { return g_lo + (g_hi - g_lo) * (y - lo) / w; };

  // Composite Simpson for the mode coefficients of h - lift.
  constexpr std::size_t kQuadPoints = 4097;  // odd count, even panel number
  const double dy = w / static_cast<double>(kQuadPoints - 1);
  const double pi = std::numbers::pi;
  const double sigma = domain.sigma();

  double value = lift(x);
  double max_abs_coeff = 0.0;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const double freq = static_cast<double>(n) * pi / w;
    double integral = 0.0;
    for (std::size_t q = 0; q < kQuadPoints; ++q) {
      const double y = lo + dy * static_cast<double>(q);
      const double f = (h(y) - lift(y)) * std::sin(freq * (y - lo));
      const double weight = (q == 0 || q == kQuadPoints - 1) ? 1.0
                            : (q % 2 == 1)                   ? 4.0
                                                             : 2.0;
      integral += weight * f;
    }
    integral *= dy / 3.0;
    const double coeff = 2.0 / w * integral;
    max_abs_coeff = std::max(max_abs_coeff, std::abs(coeff));
    const double decay = std::exp(-0.5 * sigma * sigma * freq * freq * t);
    value += coeff * decay * std::sin(freq * (x - lo));
  }

  SeriesEval out;
  out.value = value;

  // Remainder bound: coefficients of an L2 function are bounded, so the
  // tail is dominated by a geometric-type sum of the exponential factors.
  const double next_freq = static_cast<double>(n_terms + 1) * pi / w;
  const double lam_next = 0.5 * sigma * sigma * next_freq * next_freq;
  if (t > 0.0) {
    const double gap =
        0.5 * sigma * sigma *
        (std::pow((static_cast<double>(n_terms + 2)) * pi / w, 2) -
         next_freq * next_freq);
    const double r = std::exp(-gap * t);
    const double amp = std::max(max_abs_coeff, 1e-300);
    out.tail_bound = amp * std::exp(-lam_next * t) / std::max(1.0 - r, 1e-16);
  } else {
    out.tail_bound = std::numeric_limits<double>::infinity();
    const double mismatch_lo = std::abs(h(lo) - g_lo);
    const double mismatch_hi = std::abs(h(domain.upper()) - g_hi);
    out.gibbs_risk = mismatch_lo > 1e-12 || mismatch_hi > 1e-12;
  }
  return out;
}

}  // namespace wpr

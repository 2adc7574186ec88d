#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wpr/coefficients.hpp"
#include "wpr/rng.hpp"

namespace wpr {

// One realization of the common noise on a uniform time grid: n_steps
// rows of n_channels independent N(0, dt) increments. Row k covers the
// window (t_k, t_{k+1}]. Draw order is row-major (step outer, channel
// inner), which is part of the reproducibility contract.
struct NoiseRealization {
  double dt = 0.0;
  std::size_t n_steps = 0;
  std::size_t n_channels = 0;
  std::vector<double> increments;  // n_steps x n_channels, row-major

  double dw(std::size_t k, std::size_t m) const {
    return increments[k * n_channels + m];
  }
  double& dw(std::size_t k, std::size_t m) {
    return increments[k * n_channels + m];
  }
  std::span<const double> row(std::size_t k) const {
    return {increments.data() + k * n_channels, n_channels};
  }

  double horizon() const { return dt * static_cast<double>(n_steps); }
  std::uint64_t checksum() const;

  // Conditional refinement to step dt/2: each increment is split into two
  // halves by midpoint sampling (each half ~ N(dw/2, dt/4) given dw, and
  // the halves sum back to dw up to one rounding). Used for step-size bias
  // probes that must stay coupled to the original realization.
  NoiseRealization refined(std::mt19937_64& rng) const;
};

// Draws a fresh realization from the common stream of `streams`.
// n_channels == 0 is rejected: a degenerate problem is expressed by zero
// coefficients on a real channel, never by an empty channel set.
NoiseRealization generate_noise(const RngStreams& streams, double dt,
                                std::size_t n_steps, std::size_t n_channels);
NoiseRealization generate_noise(std::uint64_t seed, double dt,
                                std::size_t n_steps, std::size_t n_channels);

// Flat binary dump/load (fixed little-endian layout, header dt/K/M) so a
// realization can be replayed elsewhere.
void save_noise(const NoiseRealization& noise, const std::string& path);
NoiseRealization load_noise(const std::string& path);

// Left-endpoint stochastic sum along a stored trajectory:
//   sum_{k=from}^{to-1} sum_m rho_m(positions[k]) * dW[k][m].
// positions must have at least `to` entries beyond index `from`
// (positions[from..to-1] are read).
double ito_integrate(std::span<const double> positions,
                     const std::vector<ScalarField>& rho,
                     const NoiseRealization& noise, std::size_t from,
                     std::size_t to);

}  // namespace wpr

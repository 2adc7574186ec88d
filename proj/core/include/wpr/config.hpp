#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpr/field.hpp"
#include "wpr/problem.hpp"
#include "wpr/solver.hpp"

namespace wpr {

// Invalid configuration (bad file, unknown/missing key, bad value).
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One experiment, as read from a key = value file with dotted sections.
// Unknown keys are rejected; comments start with '#'. The canonical
// rendering (fixed key order, full precision) feeds the config hash, so
// reordering lines or editing comments does not change identity.
struct ExperimentConfig {
  // domain.*
  double domain_lower = 0.0;
  double domain_upper = 1.0;
  double sigma = 1.0;

  // problem.*
  std::string G_spec = "zero";
  std::string g_spec = "zero";
  std::string h_spec = "zero";
  std::string b_spec = "zero";
  std::vector<std::string> rho_specs;  // comma-separated in the file

  // discretization.*
  std::size_t n_particles = 0;
  double dt = 0.0;
  double horizon = 0.0;       // T
  std::size_t n_bins = 0;     // 0 = auto round(N^(1/3))
  std::size_t n_channels = 0;
  std::size_t fd_points = 0;  // J, grid intervals for the FD comparison
  double fd_dt = -1.0;        // optional; must equal dt when given

  // solver.*
  double tol = 1e-3;
  std::size_t max_iter = 25;

  // field.*
  FieldInterpolation interpolation = FieldInterpolation::PiecewiseConstant;

  // particles.*
  bool store_increments = true;

  std::uint64_t seed = 0;
  std::string output_dir;

  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse(std::istream& in, const std::string& origin);

  // Applies "key = value" for a dotted key; unknown keys throw. Used by
  // the parser and by sweeps.
  void set(const std::string& key, const std::string& value);

  // Cross-field validation; throws ConfigError with the offending key.
  void validate() const;

  // Number of time steps implied by (T, dt); validate() guarantees the
  // rounding is exact to within 1e-9 relative.
  std::size_t n_steps() const;

  std::string canonical() const;
  std::uint64_t hash() const;

  Domain domain() const;
  SpdeProblem problem() const;
  SolverSettings solver_settings(std::size_t workers) const;
};

}  // namespace wpr

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wpr/field.hpp"
#include "wpr/noise.hpp"
#include "wpr/particles.hpp"
#include "wpr/problem.hpp"
#include "wpr/solver.hpp"

namespace wpr {

// Smooth test function with analytic first and second derivatives.
// Two families:
//   bump: exp(1 - 1/(1-u^2)) on |u| < 1 with u = (x-center)/halfwidth,
//         zero outside; support must lie strictly inside the domain.
//   sine: sin(mode*pi*(x-lower)/width); vanishes on the faces but has
//         nonzero normal derivative there.
class TestFunction {
 public:
  enum class Kind { Bump, Sine };

  static TestFunction bump(const Domain& domain, double center,
                           double halfwidth);
  static TestFunction sine(const Domain& domain, int mode);

  double operator()(double x) const;
  double d1(double x) const;
  double d2(double x) const;

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  // true when the function (not just its values) vanishes on both faces.
  bool vanishes_on_boundary() const { return true; }

 private:
  Kind kind_;
  double center_ = 0, halfwidth_ = 0;  // bump
  double freq_ = 0, phase_ = 0;        // sine
  std::string name_;
};

// Catalog used by the weak-form checks: three bumps of different centers
// and widths (compact support, for the interior identity) and the first
// three sine modes (boundary-aware identity).
std::vector<TestFunction> interior_test_functions(const Domain& domain);
std::vector<TestFunction> dirichlet_test_functions(const Domain& domain);

// ---------------------------------------------------------------------------
// Pathwise weight envelope

// Fraction of (particle, step) pairs whose |A| exceeds
//   (max(sup|g|, sup|h|) + K1 t + osc(H, [0,t])) * exp(K3 t)
// by more than the factor 1 + 10 dt, where H is the particle's stochastic
// integral of the channel shapes against the common noise and osc is
// sup_{s<=t} |H(t) - H(s)|.
struct PathwiseBoundReport {
  double violation_fraction = 0;
  std::size_t n_pairs = 0;
  double max_ratio = 0;  // largest |A| / envelope seen
  double slack = 0;
};
PathwiseBoundReport check_pathwise_bound(
    const std::vector<ParticlePath>& paths,
    const std::vector<WeightTrajectory>& weights,
    const NoiseRealization& noise, const SpdeProblem& problem);

// ---------------------------------------------------------------------------
// Boundary behavior

// Mean absolute deviation of the field from the boundary datum over the
// bins whose centers lie within eps of a face, weighted by the stationary
// measure (equal bins). Throws if a layer contains no bin center.
struct LayerError {
  double eps = 0;
  double error = 0;
  std::size_t n_bins = 0;
};
std::vector<LayerError> boundary_layer_error(const FieldEstimate& field,
                                             const ScalarField& g_bar,
                                             std::span<const double> eps_list,
                                             std::size_t slice);

// Per-face boundary measure estimate: accumulated local time per particle
// and unit time. For the reflected driver with stationary start the exact
// value is sigma^2 / (2 width) per face.
struct BetaEstimate {
  double face[2] = {0, 0};
  double total() const { return face[0] + face[1]; }
};
BetaEstimate estimate_beta(const std::vector<ParticlePath>& paths, double dt,
                           std::size_t n_steps);

// Time-averaged boundary flux against phi(location, time): the same
// accumulation with phi evaluated at each contact.
double boundary_flux_average(const std::vector<ParticlePath>& paths, double dt,
                             std::size_t n_steps,
                             const std::function<double(double, double)>& phi);

// ---------------------------------------------------------------------------
// Weak-form residuals

struct WeakResidualResult {
  double residual = 0;
  double bootstrap_se = 0;
  std::size_t n_bootstrap = 0;
  double particle_term = 0;    // mean per-particle contribution
  double forcing_term = 0;     // integral of phi*b against pi over time
  double noise_term = 0;       // integral of phi*rho against pi, summed dW
  double boundary_term = 0;    // Dirichlet variant only
};

// Interior identity (compactly supported phi): time-integrated generator
// and reaction terms against the particle measure, stationary-measure
// quadratures for forcing and noise. The residual estimates
// <phi, V(T)> - <phi, V(0)> minus the right-hand side; bootstrap_se
// resamples particles.
WeakResidualResult weak_residual_interior(const SpdeProblem& problem,
                                          const SolveArtifacts& artifacts,
                                          const TestFunction& phi,
                                          std::size_t n_bootstrap = 200);

// Boundary-aware identity for phi vanishing on the faces: adds the
// boundary flux term g * (inward normal) . grad(phi), accumulated per
// particle against its local time at each face. phi must vanish on both
// faces (checked numerically).
WeakResidualResult weak_residual_dirichlet(const SpdeProblem& problem,
                                           const SolveArtifacts& artifacts,
                                           const TestFunction& phi,
                                           std::size_t n_bootstrap = 200);

// Coupled step-refined rerun of the whole solve (noise and per-particle
// increments split by conditional midpoint sampling, paths re-folded at
// dt/2, fixed point re-solved). Requires retained increments.
SolveArtifacts refine_and_resolve(const SpdeProblem& problem,
                                  const SolveArtifacts& artifacts);

// Residual, bootstrap SE and step-size bias |res(dt) - res(dt/2)| per
// catalog function; pass means |residual| <= 3*(bootstrap_se + dt_bias).
struct ResidualBand {
  std::string function_name;
  bool dirichlet = false;
  double residual = 0;
  double bootstrap_se = 0;
  double dt_bias = 0;
  double band() const { return 3.0 * (bootstrap_se + dt_bias); }
  bool pass() const { return std::abs(residual) <= band(); }
};
std::vector<ResidualBand> weak_residual_bands(const SpdeProblem& problem,
                                              const SolveArtifacts& artifacts,
                                              std::size_t n_bootstrap = 200);

// ---------------------------------------------------------------------------
// Stationarity

// Kolmogorov-Smirnov statistic of the particle positions at one slice
// against the stationary (uniform) law. Requires at least 100 particles.
double ks_statistic_uniform(const std::vector<ParticlePath>& paths,
                            const Domain& domain, std::size_t slice);

// ---------------------------------------------------------------------------
// Assembled report

struct CheckResult {
  std::string name;    // stable id, e.g. "weak-form-interior:bump-mid"
  std::string anchor;  // one-line statement of the property checked
  double value = 0;
  double bound = 0;    // pass iff value <= bound for gated checks
  bool pass = true;
  bool report_only = false;
  std::string detail;
};

struct DiagnosticsReport {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.report_only && !c.pass) return false;
    return true;
  }
};

struct DiagnosticsOptions {
  std::vector<double> layer_eps = {0.05, 0.1, 0.2};
  std::size_t n_bootstrap = 200;
  bool with_dt_bias = true;  // needs retained increments
};

DiagnosticsReport run_diagnostics(const SpdeProblem& problem,
                                  const SolveArtifacts& artifacts,
                                  const DiagnosticsOptions& options = {});

}  // namespace wpr

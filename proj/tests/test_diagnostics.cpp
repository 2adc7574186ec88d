#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "wpr/diagnostics.hpp"
#include "wpr/solver.hpp"

using namespace wpr;

namespace {

const Domain kUnit(0.0, 1.0, 1.0);

SpdeProblem make_problem(const std::string& G, const std::string& g,
                         const std::string& h, const std::string& b,
                         const std::string& rho) {
  return SpdeProblem(kUnit, ScalarField::parse(g, kUnit),
                     ScalarField::parse(h, kUnit), ScalarField::parse(b, kUnit),
                     Nonlinearity::parse(G), {ScalarField::parse(rho, kUnit)});
}

// v(x) = x is the stationary profile of the noiseless linear problem with
// datum g(x) = x: weights start at h(X_0) = X_0, stay constant between
// boundary contacts, and are pinned to g on contact.
SolveArtifacts steady_state_run() {
  auto problem = make_problem("zero", "linear:0:1", "linear:0:1", "zero",
                              "zero");
  SolverSettings s;
  s.n_particles = 2000;
  s.dt = 5e-4;
  s.n_steps = 500;  // T = 0.25
  s.n_bins = 16;
  s.tol = 1e-3;
  s.seed = 3;
  return solve(problem, s);
}

double central_d1(const TestFunction& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double central_d2(const TestFunction& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("test-function derivatives match central differences") {
  const auto bump = TestFunction::bump(kUnit, 0.5, 0.3);
  const auto sine = TestFunction::sine(kUnit, 2);

  for (double x : {0.35, 0.45, 0.5, 0.62}) {
    CHECK(bump.d1(x) == doctest::Approx(central_d1(bump, x, 1e-5)).epsilon(1e-6));
    CHECK(bump.d2(x) == doctest::Approx(central_d2(bump, x, 1e-4)).epsilon(1e-4));
  }
  for (double x : {0.1, 0.37, 0.8}) {
    CHECK(sine.d1(x) == doctest::Approx(central_d1(sine, x, 1e-5)).epsilon(1e-6));
    CHECK(sine.d2(x) == doctest::Approx(central_d2(sine, x, 1e-4)).epsilon(1e-4));
  }

  // Compact support: identically zero (value and slope) at the edge and
  // beyond.
  CHECK(bump(0.2) == 0.0);
  CHECK(bump(0.85) == 0.0);
  CHECK(bump.d1(0.2) == 0.0);
  CHECK(bump.d2(0.15) == 0.0);

  // Sine modes vanish on the faces.
  CHECK(std::abs(sine(0.0)) <= 1e-12);
  CHECK(std::abs(sine(1.0)) <= 1e-12);
}

TEST_CASE("bump support must lie strictly inside the domain") {
  CHECK_THROWS_AS(TestFunction::bump(kUnit, 0.9, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::bump(kUnit, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::bump(kUnit, 0.5, 0.0), std::invalid_argument);
  CHECK_NOTHROW(TestFunction::bump(kUnit, 0.5, 0.49));
}

TEST_CASE("the weak-form catalogs carry distinct, boundary-safe functions") {
  const auto interior = interior_test_functions(kUnit);
  const auto dirichlet = dirichlet_test_functions(kUnit);
  REQUIRE(interior.size() == 3);
  REQUIRE(dirichlet.size() == 3);

  std::vector<std::string> names;
  for (const auto& f : interior) {
    CHECK(f.kind() == TestFunction::Kind::Bump);
    CHECK(f(kUnit.lower()) == 0.0);
    CHECK(f(kUnit.upper()) == 0.0);
    names.push_back(f.name());
  }
  for (const auto& f : dirichlet) {
    CHECK(f.kind() == TestFunction::Kind::Sine);
    CHECK(std::abs(f(kUnit.lower())) <= 1e-12);
    CHECK(std::abs(f(kUnit.upper())) <= 1e-12);
    names.push_back(f.name());
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      CHECK(names[i] != names[j]);
}

TEST_CASE("the pathwise envelope holds until a weight is corrupted") {
  auto problem = make_problem("allen-cahn", "zero", "sin:1:1", "zero",
                              "const:0.2");
  SolverSettings s;
  s.n_particles = 300;
  s.dt = 1e-3;
  s.n_steps = 60;
  s.n_bins = 8;
  s.seed = 11;
  auto art = solve(problem, s);

  auto clean = check_pathwise_bound(art.paths, art.weights, art.noise, problem);
  CHECK(clean.violation_fraction == 0.0);
  CHECK(clean.n_pairs == s.n_particles * (s.n_steps + 1));
  CHECK(clean.max_ratio > 0.0);

  auto corrupted = art.weights;
  corrupted[17].values[30] *= 1000.0;
  auto dirty = check_pathwise_bound(art.paths, corrupted, art.noise, problem);
  CHECK(dirty.violation_fraction > 0.0);
  CHECK(dirty.max_ratio > clean.max_ratio);
}

TEST_CASE("boundary-measure and flux estimates reduce crafted hits exactly") {
  ParticlePath p;
  p.positions.assign(11, 0.5);
  p.hits = {{2, 0, 0.0, 0.3}, {5, 1, 1.0, 0.2}};
  std::vector<ParticlePath> paths = {p};

  auto beta = estimate_beta(paths, 0.1, 10);  // horizon 1.0
  CHECK(beta.face[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(beta.face[1] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(beta.total() == doctest::Approx(0.5).epsilon(1e-15));

  // Truncating the window drops the later hit.
  auto early = estimate_beta(paths, 0.1, 4);  // horizon 0.4
  CHECK(early.face[0] == doctest::Approx(0.3 / 0.4).epsilon(1e-12));
  CHECK(early.face[1] == 0.0);

  // phi(location, time) weighted accumulation: hits at t = 0.2 and 0.5.
  const double flux = boundary_flux_average(
      paths, 0.1, 10, [](double loc, double t) { return loc + t; });
  CHECK(flux == doctest::Approx((0.0 + 0.2) * 0.3 + (1.0 + 0.5) * 0.2)
                    .epsilon(1e-12));

  // A path that never touched the boundary contributes nothing.
  ParticlePath still;
  still.positions.assign(11, 0.5);
  auto none = estimate_beta({still}, 0.1, 10);
  CHECK(none.face[0] == 0.0);
  CHECK(none.face[1] == 0.0);

  CHECK_THROWS_AS(estimate_beta({}, 0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(estimate_beta(paths, 0.0, 10), std::invalid_argument);
}

TEST_CASE("boundary-layer errors average exactly the bins near a face") {
  FieldEstimate field(kUnit, 1, 10);
  for (std::size_t j = 0; j < 10; ++j) field.value_ref(0, j) = 2.0;
  field.value_ref(0, 0) = 2.5;
  field.value_ref(0, 9) = 1.0;
  const auto g_bar = ScalarField::constant(2.0);

  const double eps_narrow[] = {0.1};
  auto narrow = boundary_layer_error(field, g_bar, eps_narrow, 0);
  REQUIRE(narrow.size() == 1);
  CHECK(narrow[0].n_bins == 2);  // centers 0.05 and 0.95
  CHECK(narrow[0].error == doctest::Approx(0.75).epsilon(1e-13));

  const double eps_wide[] = {0.26};
  auto wide = boundary_layer_error(field, g_bar, eps_wide, 0);
  CHECK(wide[0].n_bins == 6);
  CHECK(wide[0].error == doctest::Approx(1.5 / 6.0).epsilon(1e-13));

  const double eps_thin[] = {0.04};  // thinner than half a bin
  CHECK_THROWS_AS(boundary_layer_error(field, g_bar, eps_thin, 0),
                  std::invalid_argument);
  const double eps_bad[] = {0.0};
  CHECK_THROWS_AS(boundary_layer_error(field, g_bar, eps_bad, 0),
                  std::invalid_argument);
  const double eps_huge[] = {0.5};
  CHECK_THROWS_AS(boundary_layer_error(field, g_bar, eps_huge, 0),
                  std::invalid_argument);
  const double eps_ok[] = {0.1};
  CHECK_THROWS_AS(boundary_layer_error(field, g_bar, eps_ok, 5),
                  std::invalid_argument);
}

TEST_CASE("the boundary flux term enters with the inward normal") {
  // Stationary profile v(x) = x with datum g(x) = x. For phi = sin(pi x)
  // the interior generator term integrates to -pi/2 * T and the face
  // x = 1 contributes g(1) * eta * phi'(1) * E[L_1] = (+pi) * (T/2):
  // the identity balances only with the inward normal (eta = -1 at the
  // upper face). Flipping the sign would leave a residual of about
  // 2 * boundary_term ~ pi * T.
  auto problem = make_problem("zero", "linear:0:1", "linear:0:1", "zero",
                              "zero");
  auto art = steady_state_run();
  const double T = art.noise.horizon();

  const auto phi = TestFunction::sine(kUnit, 1);
  auto res = weak_residual_dirichlet(problem, art, phi);

  // boundary_term ~ pi * beta_1 * T with beta_1 ~ 0.5.
  CHECK(res.boundary_term > 0.3);
  CHECK(res.boundary_term < 0.48);
  CHECK(res.boundary_term ==
        doctest::Approx(std::numbers::pi * 0.5 * T).epsilon(0.2));

  CHECK(std::abs(res.residual) < 0.05);
  // The wrong normal orientation would miss by twice the boundary term.
  CHECK(std::abs(res.residual + 2.0 * res.boundary_term) > 0.5);
  CHECK(res.forcing_term == 0.0);
  CHECK(res.noise_term == 0.0);
}

TEST_CASE("interior identities hold on the stationary profile") {
  auto problem = make_problem("zero", "linear:0:1", "linear:0:1", "zero",
                              "zero");
  auto art = steady_state_run();
  for (const auto& phi : interior_test_functions(kUnit)) {
    auto res = weak_residual_interior(problem, art, phi);
    CHECK(std::abs(res.residual) < 0.05);
    CHECK(res.bootstrap_se > 0.0);
    CHECK(res.boundary_term == 0.0);
  }
}

TEST_CASE("bootstrap standard errors are deterministic") {
  auto problem = make_problem("zero", "linear:0:1", "linear:0:1", "zero",
                              "zero");
  auto art = steady_state_run();
  const auto phi = TestFunction::sine(kUnit, 1);
  auto a = weak_residual_dirichlet(problem, art, phi, 100);
  auto b = weak_residual_dirichlet(problem, art, phi, 100);
  CHECK(a.residual == b.residual);
  CHECK(a.bootstrap_se == b.bootstrap_se);
  CHECK(a.bootstrap_se > 0.0);
}

TEST_CASE("step refinement stays coupled to the coarse run") {
  auto problem = make_problem("allen-cahn", "zero", "sin:1:1", "zero",
                              "const:0.2");
  SolverSettings s;
  s.n_particles = 200;
  s.dt = 1e-3;
  s.n_steps = 40;
  s.n_bins = 8;
  s.seed = 21;
  auto coarse = solve(problem, s);
  auto fine = refine_and_resolve(problem, coarse);

  CHECK(fine.settings.dt == 0.5 * s.dt);
  CHECK(fine.settings.n_steps == 2 * s.n_steps);
  CHECK(fine.noise.n_steps == 2 * s.n_steps);
  REQUIRE(fine.paths.size() == coarse.paths.size());

  for (std::size_t i : {std::size_t{0}, std::size_t{99}}) {
    CHECK(fine.paths[i].positions[0] == coarse.paths[i].positions[0]);
    REQUIRE(fine.paths[i].increments.size() == 2 * s.n_steps);
    for (std::size_t k = 0; k < s.n_steps; ++k) {
      const double sum = fine.paths[i].increments[2 * k] +
                         fine.paths[i].increments[2 * k + 1];
      CHECK(sum ==
            doctest::Approx(coarse.paths[i].increments[k]).epsilon(1e-12));
    }
  }
  // The refined common noise sums back to the coarse increments too.
  for (std::size_t k = 0; k < s.n_steps; ++k)
    CHECK(fine.noise.dw(2 * k, 0) + fine.noise.dw(2 * k + 1, 0) ==
          doctest::Approx(coarse.noise.dw(k, 0)).epsilon(1e-12));

  // Without retained increments the refinement is impossible.
  s.retain_increments = false;
  auto bare = solve(problem, s);
  CHECK_THROWS_AS(refine_and_resolve(problem, bare), std::invalid_argument);
}

TEST_CASE("the KS statistic separates uniform from squeezed clouds") {
  RngStreams streams(91);
  auto paths = simulate_ensemble(kUnit, streams, 2000, 1e-3, 5);
  CHECK(ks_statistic_uniform(paths, kUnit, 0) < 0.05);
  CHECK(ks_statistic_uniform(paths, kUnit, 5) < 0.05);

  // Squeeze every position into [0, 1/2]: the distance approaches 1/2.
  auto squeezed = paths;
  for (auto& p : squeezed)
    for (auto& x : p.positions) x *= 0.5;
  CHECK(ks_statistic_uniform(squeezed, kUnit, 0) > 0.45);

  std::vector<ParticlePath> few(paths.begin(), paths.begin() + 50);
  CHECK_THROWS_AS(ks_statistic_uniform(few, kUnit, 0), std::invalid_argument);
  CHECK_THROWS_AS(ks_statistic_uniform(paths, kUnit, 99), std::invalid_argument);
}

TEST_CASE("the assembled report passes on a healthy run") {
  auto problem = make_problem("allen-cahn", "zero", "sin:1:1", "zero",
                              "const:0.2");
  SolverSettings s;
  s.n_particles = 400;
  s.dt = 1e-3;
  s.n_steps = 50;
  // 16 bins so the default 0.05 boundary layer contains a bin center
  s.n_bins = 16;
  s.seed = 11;
  auto art = solve(problem, s);

  DiagnosticsOptions opt;
  opt.n_bootstrap = 50;
  auto report = run_diagnostics(problem, art, opt);
  CHECK(report.all_passed());
  CHECK(report.checks.size() >= 12);

  auto has = [&](const std::string& name) {
    for (const auto& c : report.checks)
      if (c.name.find(name) != std::string::npos) return true;
    return false;
  };
  CHECK(has("fixed-point-converged"));
  CHECK(has("pathwise-weight-bound"));
  CHECK(has("boundary-measure-face0"));
  CHECK(has("weak-form-dirichlet"));
  CHECK(has("stationarity-ks"));
  CHECK(has("coefficient-bounds"));

  // At this step size the boundary-measure gate steps aside.
  for (const auto& c : report.checks)
    if (c.name.rfind("boundary-measure", 0) == 0) CHECK(c.report_only);
}

}  // TEST_SUITE

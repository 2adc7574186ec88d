#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "wpr/oracle.hpp"

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

NoiseRealization zero_noise(double dt, std::size_t n_steps) {
  NoiseRealization z;
  z.dt = dt;
  z.n_steps = n_steps;
  z.n_channels = 1;
  z.increments.assign(n_steps, 0.0);
  return z;
}

// Hand-built grid snapshot whose slice-0 interpolant is v(x) = 2x.
GridSolution linear_grid() {
  GridSolution g;
  g.dx = 0.5;
  g.dt = 0.1;
  g.n_steps = 0;
  g.xs = {0.0, 0.5, 1.0};
  g.values = {0.0, 1.0, 2.0};
  return g;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("segment averages integrate the linear interpolant exactly") {
  GridSolution g;
  g.dx = 0.25;
  g.dt = 0.1;
  g.n_steps = 0;
  g.xs = {0.0, 0.25, 0.5, 0.75, 1.0};

  SUBCASE("identity nodal values give midpoint averages") {
    g.values = g.xs;  // interpolant is v(x) = x
    CHECK(g.segment_average(0, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g.segment_average(0, 0.1, 0.2) ==
          doctest::Approx(0.15).epsilon(1e-13));  // inside one cell
    CHECK(g.segment_average(0, 0.1, 0.6) ==
          doctest::Approx(0.35).epsilon(1e-13));  // spans three cells
    CHECK(g.segment_average(0, 0.75, 1.0) ==
          doctest::Approx(0.875).epsilon(1e-14));
  }

  SUBCASE("zig-zag nodal values") {
    g.values = {0.0, 1.0, 0.0, 1.0, 0.0};
    CHECK(g.segment_average(0, 0.0, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
    // [0.125, 0.375]: both half-cells average 0.75.
    CHECK(g.segment_average(0, 0.125, 0.375) ==
          doctest::Approx(0.75).epsilon(1e-13));
  }

  SUBCASE("degenerate or out-of-grid segments are rejected") {
    g.values = g.xs;
    CHECK_THROWS_AS(g.segment_average(0, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(g.segment_average(0, 0.7, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(g.segment_average(0, 1.5, 2.0), std::invalid_argument);
  }
}

TEST_CASE("rows after the initial one are pinned to the boundary datum") {
  auto problem = make_problem("zero", "const:3", "const:1", "zero", "const:0.5");
  NoiseRealization noise;
  noise.dt = 1e-3;
  noise.n_steps = 8;
  noise.n_channels = 1;
  noise.increments.assign(noise.n_steps, 0.0);
  for (std::size_t k = 0; k < noise.n_steps; ++k)
    noise.increments[k] = (k % 2 == 0) ? 0.05 : -0.03;

  auto sol = fd_solve(problem, noise, 16);
  const std::size_t J = sol.n_points() - 1;
  // Row 0 carries the initial density, not the boundary datum.
  for (std::size_t j = 0; j <= J; ++j) CHECK(sol.value(0, j) == 1.0);
  // Every later row holds g exactly at both faces, even though the noise
  // shape rho is nonzero there.
  for (std::size_t k = 1; k <= noise.n_steps; ++k) {
    CHECK(sol.value(k, 0) == 3.0);
    CHECK(sol.value(k, J) == 3.0);
  }
  // Interior really moved (noise injected).
  CHECK(sol.value(1, J / 2) != sol.value(0, J / 2));
}

TEST_CASE("explicit substep counts violating the CFL bound are rejected") {
  auto problem = make_problem("zero", "zero", "const:1", "zero", "zero");
  auto noise = zero_noise(1e-3, 2);

  // J = 100, dt = 1e-3, sigma = 1: per-step diffusion number is 10.
  CHECK_THROWS_AS(fd_solve(problem, noise, 100, 2), std::invalid_argument);

  // Automatic selection picks the smallest admissible substep count.
  auto sol = fd_solve(problem, noise, 100);
  CHECK(sol.substeps == 20);
  CHECK(sol.cfl == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.cfl <= 0.5 + 1e-12);

  CHECK_THROWS_AS(fd_solve(problem, noise, 1), std::invalid_argument);
  auto two_channel = zero_noise(1e-3, 2);
  two_channel.n_channels = 2;
  two_channel.increments.assign(4, 0.0);
  CHECK_THROWS_AS(fd_solve(problem, two_channel, 16), std::invalid_argument);
}

TEST_CASE("series reference matches the closed-form sine expansion") {
  // h == 1, g == 0 on the unit domain: coefficients are 4/(n pi) for odd
  // n, zero for even n, each mode decaying like exp(-n^2 pi^2 t / 2).
  const auto h = ScalarField::parse("const:1", kUnit);
  const auto g = ScalarField::parse("zero", kUnit);
  const double t = 0.05, x = 0.3;
  const double pi = std::numbers::pi;

  double expected = 0.0;
  for (std::size_t n = 1; n <= 51; n += 2) {
    const double nd = static_cast<double>(n);
    expected += 4.0 / (nd * pi) * std::exp(-0.5 * nd * nd * pi * pi * t) *
                std::sin(nd * pi * x);
  }

  auto eval = series_reference(h, g, kUnit, t, x, 51);
  CHECK(eval.value == doctest::Approx(expected).epsilon(1e-9));
  CHECK(eval.gibbs_risk == false);
  CHECK(eval.tail_bound > 0.0);
  CHECK(std::isfinite(eval.tail_bound));

  // The truncation bound really covers the neglected modes.
  auto finer = series_reference(h, g, kUnit, t, x, 101);
  CHECK(std::abs(finer.value - eval.value) <= eval.tail_bound + 1e-15);

  // Symmetric data stay symmetric.
  auto mirrored = series_reference(h, g, kUnit, t, 1.0 - x, 51);
  CHECK(mirrored.value == doctest::Approx(eval.value).epsilon(1e-12));

  CHECK_THROWS_AS(series_reference(h, g, kUnit, t, 1.5, 51),
                  std::invalid_argument);
  CHECK_THROWS_AS(series_reference(h, g, kUnit, -0.1, x, 51),
                  std::invalid_argument);
  CHECK_THROWS_AS(series_reference(h, g, kUnit, t, x, 0),
                  std::invalid_argument);
}

TEST_CASE("initial-time evaluation flags boundary mismatch") {
  const auto g = ScalarField::parse("zero", kUnit);
  const auto h_mismatch = ScalarField::parse("const:1", kUnit);
  const auto h_match = ScalarField::parse("sin:1:1", kUnit);

  auto at_zero = series_reference(h_mismatch, g, kUnit, 0.0, 0.5, 31);
  CHECK(at_zero.gibbs_risk == true);
  CHECK(std::isinf(at_zero.tail_bound));

  auto compatible = series_reference(h_match, g, kUnit, 0.0, 0.5, 31);
  CHECK(compatible.gibbs_risk == false);

  auto later = series_reference(h_mismatch, g, kUnit, 0.01, 0.5, 31);
  CHECK(later.gibbs_risk == false);
  CHECK(std::isfinite(later.tail_bound));
}

TEST_CASE("noiseless diffusion agrees with the series reference") {
  auto problem = make_problem("zero", "zero", "const:1", "zero", "zero");
  auto noise = zero_noise(1e-3, 50);  // T = 0.05
  auto sol = fd_solve(problem, noise, 64);

  const auto h = ScalarField::parse("const:1", kUnit);
  const auto g = ScalarField::parse("zero", kUnit);
  for (double x : {0.125, 0.25, 0.5, 0.703125}) {
    const std::size_t j = static_cast<std::size_t>(std::lround(x / sol.dx));
    REQUIRE(sol.xs[j] == doctest::Approx(x).epsilon(1e-14));
    auto ref = series_reference(h, g, kUnit, 0.05, x, 64);
    CHECK(sol.value(noise.n_steps, j) ==
          doctest::Approx(ref.value).epsilon(5e-3));
  }
}

TEST_CASE("runaway reaction reports the blow-up step") {
  auto problem = make_problem("const:1e6", "const:1", "const:1", "zero", "zero");
  auto noise = zero_noise(1e-3, 150);
  bool thrown = false;
  try {
    fd_solve(problem, noise, 4);
  } catch (const std::runtime_error& e) {
    thrown = true;
    CHECK(std::string(e.what()).find("blew up at step") != std::string::npos);
  }
  CHECK(thrown);
}

TEST_CASE("field-versus-grid distance on a hand value") {
  auto grid = linear_grid();  // v(x) = 2x
  FieldEstimate field(kUnit, 1, 4);
  // All-zero field against bin averages 0.25, 0.75, 1.25, 1.75 of 2x.
  CHECK(l1_pi_distance(field, grid, 0) == doctest::Approx(1.0).epsilon(1e-13));

  field.value_ref(0, 0) = 0.25;
  field.value_ref(0, 1) = 0.75;
  field.value_ref(0, 2) = 1.25;
  field.value_ref(0, 3) = 1.75;
  CHECK(l1_pi_distance(field, grid, 0) == doctest::Approx(0.0).epsilon(1e-13));

  CHECK_THROWS_AS(l1_pi_distance(field, grid, 1), std::invalid_argument);
}

}  // TEST_SUITE

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wpr/field.hpp"
#include "wpr/weights.hpp"

using namespace wpr;

namespace {

const Domain kUnit(0.0, 1.0, 1.0);

// One-step "paths" pinned at fixed positions with fixed weights.
void add_point(std::vector<ParticlePath>& paths,
               std::vector<WeightTrajectory>& weights, double x, double a) {
  ParticlePath p;
  p.positions = {x};
  paths.push_back(std::move(p));
  WeightTrajectory w;
  w.values = {a};
  weights.push_back(std::move(w));
}

}  // namespace

TEST_SUITE("field") {

TEST_CASE("bins take the conditional mean; gaps interpolate; edges stay flat") {
  std::vector<ParticlePath> paths;
  std::vector<WeightTrajectory> weights;
  // occupied: bin 2 (centers 0.25) with values 1 and 3, bin 7 with value -1
  add_point(paths, weights, 0.21, 1.0);
  add_point(paths, weights, 0.29, 3.0);
  add_point(paths, weights, 0.75, -1.0);
  auto f = estimate_field(paths, weights, kUnit, 10);
  REQUIRE(f.n_bins() == 10);
  REQUIRE(f.n_slices() == 1);
  CHECK(f.value(0, 2) == doctest::Approx(2.0));
  CHECK(f.occupancy(0, 2) == 2);
  CHECK(f.value(0, 7) == doctest::Approx(-1.0));

  // interior gap: linear in the bin index between the occupied neighbors
  for (std::size_t j = 3; j < 7; ++j)
    CHECK(f.value(0, j) ==
          doctest::Approx(2.0 + (-3.0) * static_cast<double>(j - 2) / 5.0));
  // edge gaps: flat continuation of the nearest occupied bin
  CHECK(f.value(0, 0) == doctest::Approx(2.0));
  CHECK(f.value(0, 1) == doctest::Approx(2.0));
  CHECK(f.value(0, 8) == doctest::Approx(-1.0));
  CHECK(f.value(0, 9) == doctest::Approx(-1.0));
  for (std::size_t j = 0; j < 10; ++j)
    if (j != 2 && j != 7) CHECK(f.occupancy(0, j) == 0);
}

TEST_CASE("the upper face lands in the last bin") {
  std::vector<ParticlePath> paths;
  std::vector<WeightTrajectory> weights;
  add_point(paths, weights, 1.0, 5.0);
  add_point(paths, weights, 0.0, 1.0);
  auto f = estimate_field(paths, weights, kUnit, 4);
  CHECK(f.occupancy(0, 3) == 1);
  CHECK(f.value(0, 3) == doctest::Approx(5.0));
  CHECK(f.occupancy(0, 0) == 1);
}

TEST_CASE("count-weighted bin means recover the ensemble mean exactly") {
  std::vector<ParticlePath> paths;
  std::vector<WeightTrajectory> weights;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ux(0.0, 1.0), ua(-2.0, 2.0);
  double mean = 0;
  const std::size_t n = 500;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = ua(rng);
    add_point(paths, weights, ux(rng), a);
    mean += a;
  }
  mean /= static_cast<double>(n);
  auto f = estimate_field(paths, weights, kUnit, 8);
  double recovered = 0;
  for (std::size_t j = 0; j < 8; ++j)
    recovered += f.value(0, j) * static_cast<double>(f.occupancy(0, j));
  recovered /= static_cast<double>(n);
  CHECK(recovered == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("evaluate: piecewise-constant vs linear-between-centers") {
  auto f = FieldEstimate::zero(kUnit, 1, 4);
  for (std::size_t j = 0; j < 4; ++j)
    f.value_ref(0, j) = static_cast<double>(j);  // centers 0.125 .. 0.875
  CHECK(f.evaluate(0, 0.2) == 0.0);
  CHECK(f.evaluate(0, 0.26) == 1.0);
  CHECK(f.evaluate(0, 1.0) == 3.0);

  auto lin = FieldEstimate::zero(kUnit, 1, 4, FieldInterpolation::Linear);
  for (std::size_t j = 0; j < 4; ++j)
    lin.value_ref(0, j) = static_cast<double>(j);
  CHECK(lin.evaluate(0, 0.25) == doctest::Approx(0.5));
  CHECK(lin.evaluate(0, 0.5) == doctest::Approx(1.5));
  // outside the first/last center the profile continues flat
  CHECK(lin.evaluate(0, 0.05) == doctest::Approx(0.0));
  CHECK(lin.evaluate(0, 0.95) == doctest::Approx(3.0));
}

TEST_CASE("estimate_field is schedule-independent") {
  std::vector<ParticlePath> paths;
  std::vector<WeightTrajectory> weights;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    ParticlePath p;
    WeightTrajectory w;
    for (int k = 0; k < 6; ++k) {
      p.positions.push_back(ux(rng));
      w.values.push_back(ux(rng) - 0.5);
    }
    paths.push_back(std::move(p));
    weights.push_back(std::move(w));
  }
  auto serial = estimate_field(paths, weights, kUnit, 5,
                               FieldInterpolation::PiecewiseConstant, 1);
  auto threaded = estimate_field(paths, weights, kUnit, 5,
                                 FieldInterpolation::PiecewiseConstant, 3);
  CHECK(serial.checksum() == threaded.checksum());
}

TEST_CASE("shape mismatches are rejected") {
  std::vector<ParticlePath> paths;
  std::vector<WeightTrajectory> weights;
  add_point(paths, weights, 0.5, 1.0);
  weights[0].values.push_back(2.0);  // longer than the path
  CHECK_THROWS_AS(estimate_field(paths, weights, kUnit, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_field({}, {}, kUnit, 4), std::invalid_argument);
}

TEST_CASE("l1 distance in the stationary measure") {
  auto a = FieldEstimate::zero(kUnit, 1, 4);
  auto b = FieldEstimate::zero(kUnit, 1, 4);
  b.value_ref(0, 0) = 2.0;
  b.value_ref(0, 3) = -1.0;
  CHECK(l1_pi_distance(a, b, 0) == doctest::Approx(3.0 / 4.0));
  auto c = FieldEstimate::zero(kUnit, 1, 5);
  CHECK_THROWS_AS(l1_pi_distance(a, c, 0), std::invalid_argument);
}

TEST_CASE("exponential moment probe propagates overflow as infinity") {
  auto f = FieldEstimate::zero(kUnit, 1, 4);
  CHECK(exp_moment_probe(f, 0.1, 0) == doctest::Approx(1.0));
  f.value_ref(0, 2) = 1e6;
  CHECK(std::isinf(exp_moment_probe(f, 0.1, 0)));
}

TEST_CASE("default bin count is the cube root rounded") {
  CHECK(default_bin_count(1) == 1);
  CHECK(default_bin_count(1000) == 10);
  CHECK(default_bin_count(10000) == 22);
  CHECK(default_bin_count(100000) == 46);
}

}  // TEST_SUITE

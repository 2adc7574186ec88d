#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "wpr/coefficients.hpp"
#include "wpr/problem.hpp"

using namespace wpr;

namespace {
const Domain kUnit(0.0, 1.0, 1.0);
}

TEST_SUITE("problem") {

TEST_CASE("coefficient catalog evaluates as specified") {
  auto zero = ScalarField::parse("zero", kUnit);
  auto c = ScalarField::parse("const:2.5", kUnit);
  auto lin = ScalarField::parse("linear:1:-2", kUnit);
  auto s2 = ScalarField::parse("sin:0.5:2", kUnit);
  CHECK(zero(0.3) == 0.0);
  CHECK(c(0.9) == 2.5);
  CHECK(lin(0.25) == doctest::Approx(0.5));
  // mode k=2 on the unit domain: 0.5 * sin(2*pi*x)
  CHECK(s2(0.25) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s2(0.125) == doctest::Approx(0.5 * std::sin(M_PI / 4)).epsilon(1e-12));

  // sine modes anchor to the domain, not to absolute coordinates
  Domain shifted(2.0, 4.0, 1.0);
  auto s1 = ScalarField::parse("sin:1:1", shifted);
  CHECK(s1(3.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s1(2.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("coefficient specs round-trip through parse") {
  for (const char* spec : {"zero", "const:2.5", "linear:1:-2", "sin:0.5:3"}) {
    auto f = ScalarField::parse(spec, kUnit);
    auto g = ScalarField::parse(f.spec(), kUnit);
    for (double x : {0.0, 0.1, 0.37, 0.9, 1.0}) CHECK(f(x) == g(x));
  }
}

TEST_CASE("coefficient parsing rejects malformed specs") {
  CHECK_THROWS_AS(ScalarField::parse("gauss:1", kUnit), std::invalid_argument);
  CHECK_THROWS_AS(ScalarField::parse("const", kUnit), std::invalid_argument);
  CHECK_THROWS_AS(ScalarField::parse("const:x", kUnit), std::invalid_argument);
  CHECK_THROWS_AS(ScalarField::parse("sin:1:0", kUnit), std::invalid_argument);
  CHECK_THROWS_AS(ScalarField::parse("sin:1:1.5", kUnit), std::invalid_argument);
  CHECK_THROWS_AS(ScalarField::parse("linear:1", kUnit), std::invalid_argument);
  CHECK_THROWS_AS(Nonlinearity::parse("cubic"), std::invalid_argument);
  CHECK_THROWS_AS(Nonlinearity::parse("allen-cahn:2"), std::invalid_argument);
}

TEST_CASE("reaction catalog evaluates and reports field dependence") {
  auto ac = Nonlinearity::parse("allen-cahn");
  CHECK(ac(0.0, 0.5) == 1.0);
  CHECK(ac(2.0, 0.1) == doctest::Approx(-3.0));
  CHECK(ac.depends_on_field());

  auto p4 = Nonlinearity::parse("phi4");
  CHECK(p4(3.0, 0.0) == doctest::Approx(-9.0));
  CHECK(p4.depends_on_field());

  auto k = Nonlinearity::parse("const:-1.5");
  CHECK(k(7.0, 0.2) == -1.5);
  CHECK_FALSE(k.depends_on_field());
  CHECK_FALSE(Nonlinearity::parse("zero").depends_on_field());
}

TEST_CASE("problem construction freezes the probe bounds") {
  auto zero = ScalarField::parse("zero", kUnit);
  auto h = ScalarField::parse("sin:1:1", kUnit);
  SpdeProblem p(kUnit, zero, h, zero, Nonlinearity::parse("allen-cahn"),
                {ScalarField::parse("sin:1:1", kUnit)});
  CHECK(p.h_sup() == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(p.g_sup() == 0.0);
  CHECK(p.K1() == 0.0);  // no forcing
  // sup of the reaction factor G(v) = 1 - v^2 is 1, the weight growth rate
  CHECK(p.K3() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.n_channels() == 1);

  CHECK_THROWS_AS(SpdeProblem(kUnit, zero, h, zero, Nonlinearity::parse("zero"),
                              {}),
                  std::invalid_argument);
}

TEST_CASE("probed growth and Lipschitz constants are grid-stable") {
  auto zero = ScalarField::parse("zero", kUnit);
  auto h = ScalarField::parse("sin:1:1", kUnit);
  SpdeProblem p(kUnit, zero, h, zero, Nonlinearity::parse("allen-cahn"),
                {ScalarField::parse("sin:1:1", kUnit)});
  auto cb = verify_condition_bounds(p, -5.0, 5.0, 401, 1001);
  CHECK(cb.K1_stable);
  CHECK(cb.K3_stable);
  CHECK(cb.L1_stable);
  CHECK(cb.L2_stable);
  // d/dv[(1-v^2)v] = 1-3v^2; normalized pairwise growth stays near 1
  CHECK(cb.L1 <= 1.0 + 1e-6);
  CHECK(cb.L1 == doctest::Approx(1.0).epsilon(0.05));
  CHECK(cb.L2 <= 1.0 + 1e-9);
  CHECK(cb.K3 == doctest::Approx(1.0).epsilon(1e-9));
}

}  // TEST_SUITE

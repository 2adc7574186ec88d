#pragma once

#include <cstddef>
#include <vector>

#include "wpr/coefficients.hpp"
#include "wpr/domain.hpp"

namespace wpr {

// Numeric estimates of the coefficient bounds the weight dynamics rely
// on, evaluated on probe grids:
//   K1 = sup_x |b|                (forcing bound)
//   K2 = sup_x sum_m rho_m^2     (noise energy bound)
//   K3 = sup_{v,x} G             (one-sided reaction bound; upper only)
//   L1 = sup |G| / (1 + v^2)     (quadratic growth)
//   L2 = sup |G(v1,x)-G(v2,x)| / (|v1-v2| (1+|v1|+|v2|))
struct ConditionBounds {
  double K1 = 0, K2 = 0, K3 = 0, L1 = 0, L2 = 0;
  double v_lo = 0, v_hi = 0;
  std::size_t n_v = 0, n_x = 0;
  // Probe-grid estimates are always finite; the flags record that each
  // estimate was stable under refinement (doubling the grid moved it by
  // less than 1% relative), a cheap unboundedness tripwire.
  bool K1_stable = false, K2_stable = false, K3_stable = false;
  bool L1_stable = false, L2_stable = false;
};

// Coefficient bundle for one equation: boundary value g, initial density
// h, forcing b, reaction factor G, and the noise channel shapes rho_m,
// all on a fixed domain. Sup norms used by runtime guards and the weight
// bound are frozen at construction from a probe grid.
class SpdeProblem {
 public:
  SpdeProblem(const Domain& domain, ScalarField g, ScalarField h,
              ScalarField b, Nonlinearity G, std::vector<ScalarField> rho);

  const Domain& domain() const { return domain_; }
  double g(double x) const { return g_(x); }
  double h(double x) const { return h_(x); }
  double b(double x) const { return b_(x); }
  double G(double v, double x) const { return G_(v, x); }
  const ScalarField& g_field() const { return g_; }
  const ScalarField& h_field() const { return h_; }
  const ScalarField& b_field() const { return b_; }
  const Nonlinearity& G_term() const { return G_; }
  const std::vector<ScalarField>& rho() const { return rho_; }
  std::size_t n_channels() const { return rho_.size(); }

  // sup|b|, sup sum rho^2, sup G over the construction probe.
  double K1() const { return K1_; }
  double K2() const { return K2_; }
  double K3() const { return K3_; }
  double g_sup() const { return g_sup_; }
  double h_sup() const { return h_sup_; }

 private:
  Domain domain_;
  ScalarField g_, h_, b_;
  Nonlinearity G_;
  std::vector<ScalarField> rho_;
  double K1_, K2_, K3_, g_sup_, h_sup_;
};

// Report-only evaluation of the coefficient bounds on explicit probe
// grids (v in [v_lo, v_hi] with n_v points, x over the domain with n_x
// points). Never throws on large values; callers decide what to accept.
ConditionBounds verify_condition_bounds(const SpdeProblem& problem,
                                        double v_lo, double v_hi,
                                        std::size_t n_v, std::size_t n_x);

}  // namespace wpr

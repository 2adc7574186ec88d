#include "wpr/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpr {
namespace {

constexpr double kDefaultVLo = -5.0;
constexpr double kDefaultVHi = 5.0;
constexpr std::size_t kDefaultNv = 401;
constexpr std::size_t kDefaultNx = 1001;

double grid_point(double lo, double hi, std::size_t i, std::size_t n) {
  if (n == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

struct RawBounds {
  double K1, K2, K3, L1, L2;
};

RawBounds probe(const SpdeProblem& p, double v_lo, double v_hi,
                std::size_t n_v, std::size_t n_x) {
  const Domain& d = p.domain();
  RawBounds r{0, 0, -std::numeric_limits<double>::infinity(), 0, 0};

  for (std::size_t i = 0; i < n_x; ++i) {
    const double x = grid_point(d.lower(), d.upper(), i, n_x);
    r.K1 = std::max(r.K1, std::abs(p.b(x)));
    double rho_sq = 0.0;
    for (const auto& c : p.rho()) {
      const double v = c(x);
      rho_sq += v * v;
    }
    r.K2 = std::max(r.K2, rho_sq);
  }

  // The catalog reactions do not depend on x, but probe a few x anyway so
  // the estimates stay honest if that changes.
  const std::size_t n_x_reaction = p.G_term().is_zero() ? 1 : std::min<std::size_t>(n_x, 5);
  for (std::size_t j = 0; j < n_x_reaction; ++j) {
    const double x = grid_point(d.lower(), d.upper(), j, n_x_reaction);
    std::vector<double> gv(n_v);
    for (std::size_t i = 0; i < n_v; ++i) {
      const double v = grid_point(v_lo, v_hi, i, n_v);
      gv[i] = p.G(v, x);
      r.K3 = std::max(r.K3, gv[i]);
      r.L1 = std::max(r.L1, std::abs(gv[i]) / (1.0 + v * v));
    }
    for (std::size_t i = 0; i < n_v; ++i) {
      const double v1 = grid_point(v_lo, v_hi, i, n_v);
      for (std::size_t k = i + 1; k < n_v; ++k) {
        const double v2 = grid_point(v_lo, v_hi, k, n_v);
        const double num = std::abs(gv[i] - gv[k]);
        const double den = std::abs(v1 - v2) * (1.0 + std::abs(v1) + std::abs(v2));
        if (den > 0.0) r.L2 = std::max(r.L2, num / den);
      }
    }
  }
  if (!std::isfinite(r.K3)) r.K3 = 0.0;  // empty v grid cannot happen; belt and braces
  return r;
}

bool close(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
  return std::abs(a - b) <= 0.01 * scale;
}

}  // namespace

SpdeProblem::SpdeProblem(const Domain& domain, ScalarField g, ScalarField h,
                         ScalarField b, Nonlinearity G,
                         std::vector<ScalarField> rho)
    : domain_(domain),
      g_(g),
      h_(h),
      b_(b),
      G_(G),
      rho_(std::move(rho)) {
  if (rho_.empty())
    throw std::invalid_argument(
        "SpdeProblem: at least one noise channel is required (use a zero "
        "channel for a noiseless problem)");

  double g_sup = 0, h_sup = 0, b_sup = 0, rho_sq_sup = 0;
  for (std::size_t i = 0; i < kDefaultNx; ++i) {
    const double x = grid_point(domain_.lower(), domain_.upper(), i, kDefaultNx);
    g_sup = std::max(g_sup, std::abs(g_(x)));
    h_sup = std::max(h_sup, std::abs(h_(x)));
    b_sup = std::max(b_sup, std::abs(b_(x)));
    double rho_sq = 0.0;
    for (const auto& c : rho_) {
      const double v = c(x);
      rho_sq += v * v;
    }
    rho_sq_sup = std::max(rho_sq_sup, rho_sq);
  }
  g_sup_ = g_sup;
  h_sup_ = h_sup;
  K1_ = b_sup;
  K2_ = rho_sq_sup;

  double K3 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kDefaultNv; ++i) {
    const double v = grid_point(kDefaultVLo, kDefaultVHi, i, kDefaultNv);
    K3 = std::max(K3, G_(v, domain_.lower()));
  }
  K3_ = K3;
}

ConditionBounds verify_condition_bounds(const SpdeProblem& problem,
                                        double v_lo, double v_hi,
                                        std::size_t n_v, std::size_t n_x) {
  if (!(v_hi > v_lo))
    throw std::invalid_argument("verify_condition_bounds: v range is empty");
  if (n_v < 2 || n_x < 2)
    throw std::invalid_argument("verify_condition_bounds: need at least 2 probe points");

  RawBounds coarse = probe(problem, v_lo, v_hi, n_v, n_x);
  RawBounds fine = probe(problem, v_lo, v_hi, 2 * n_v - 1, 2 * n_x - 1);

  ConditionBounds out;
  out.K1 = fine.K1;
  out.K2 = fine.K2;
  out.K3 = fine.K3;
  out.L1 = fine.L1;
  out.L2 = fine.L2;
  out.v_lo = v_lo;
  out.v_hi = v_hi;
  out.n_v = n_v;
  out.n_x = n_x;
  out.K1_stable = close(coarse.K1, fine.K1);
  out.K2_stable = close(coarse.K2, fine.K2);
  out.K3_stable = close(coarse.K3, fine.K3);
  out.L1_stable = close(coarse.L1, fine.L1);
  out.L2_stable = close(coarse.L2, fine.L2);
  return out;
}

}  // namespace wpr

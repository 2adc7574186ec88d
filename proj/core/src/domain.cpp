#include "wpr/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace wpr {

Domain::Domain(double lower, double upper, double sigma)
    : lower_(lower), upper_(upper), sigma_(sigma) {
  if (!(std::isfinite(lower) && std::isfinite(upper) && std::isfinite(sigma)))
    throw std::invalid_argument("Domain: bounds and sigma must be finite");
  if (!(upper > lower))
    throw std::invalid_argument("Domain: upper must exceed lower");
  if (sigma < 0.0)
    throw std::invalid_argument("Domain: sigma must be nonnegative");
}

double Domain::fold(double y) const {
  if (y >= lower_ && y <= upper_) return y;
  const double w = width();
  double z = std::fmod(y - lower_, 2.0 * w);
  if (z < 0.0) z += 2.0 * w;
  double folded = z <= w ? z : 2.0 * w - z;
  double x = lower_ + folded;
  if (x < lower_) x = lower_;
  if (x > upper_) x = upper_;
  return x;
}

Domain::BoundaryDistance Domain::dist_to_boundary(double x) const {
  double d0 = x - lower_;
  double d1 = upper_ - x;
  if (d0 <= d1) return {d0, 0};
  return {d1, 1};
}

Domain::HitProbabilities Domain::bridge_hit_prob(double x0, double x1,
                                                 double dt,
                                                 double sigma) const {
  if (!(dt > 0.0)) throw std::invalid_argument("bridge_hit_prob: dt must be positive");
  if (sigma < 0.0) throw std::invalid_argument("bridge_hit_prob: sigma must be nonnegative");
  if (!contains(x0) || !contains(x1))
    throw std::invalid_argument("bridge_hit_prob: endpoints must lie in the closed domain");

  HitProbabilities p{};
  const double var = sigma * sigma * dt;
  for (int f = 0; f < n_faces; ++f) {
    const double loc = face_location(f);
    const double d0 = std::abs(x0 - loc);
    const double d1 = std::abs(x1 - loc);
    if (d0 == 0.0 || d1 == 0.0) {
      p.face[f] = 1.0;
    } else if (var == 0.0) {
      p.face[f] = 0.0;
    } else {
      p.face[f] = std::exp(-2.0 * d0 * d1 / var);
    }
  }
  return p;
}

double Domain::sample_stationary(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(lower_, upper_);
  return u(rng);
}

}  // namespace wpr

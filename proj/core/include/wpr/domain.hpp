#pragma once

#include <random>

namespace wpr {

// Interval with reflecting boundary for the driving motion. The reflected
// process with diffusion coefficient sigma has the uniform law on
// [lower, upper] as its stationary measure; that measure is the reference
// weighting for all field estimates.
class Domain {
 public:
  Domain(double lower, double upper, double sigma);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double sigma() const { return sigma_; }
  double width() const { return upper_ - lower_; }

  static constexpr int n_faces = 2;  // 0 = lower, 1 = upper
  double face_location(int face) const { return face == 0 ? lower_ : upper_; }

  bool contains(double x) const { return x >= lower_ && x <= upper_; }
  bool on_face(double x) const { return x == lower_ || x == upper_; }
  int face_of(double x) const { return x == lower_ ? 0 : 1; }

  // Reflection map: periodize y with period 2*width, then fold back into
  // the interval. Identical to iterated reflection across whichever face
  // is violated, for overshoots of any size. Points already inside are
  // returned unchanged (exactly).
  double fold(double y) const;

  struct BoundaryDistance {
    double distance;
    int face;
  };
  // Distance to the nearest face; ties resolve to the lower face.
  BoundaryDistance dist_to_boundary(double x) const;

  struct HitProbabilities {
    double face[2];
    // Probability that at least one face was touched, faces treated as
    // independent one-sided barriers.
    double any() const { return 1.0 - (1.0 - face[0]) * (1.0 - face[1]); }
  };
  // Per-face probability that a Brownian bridge from x0 to x1 over a step
  // of length dt touches the face: exp(-2*d0*d1 / (sigma^2*dt)) with d0,
  // d1 the endpoint distances to that face. An endpoint lying exactly on
  // a face makes that face certain; sigma == 0 degenerates to 0/1.
  HitProbabilities bridge_hit_prob(double x0, double x1, double dt,
                                   double sigma) const;

  // Draw from the stationary law (uniform on the interval) by inverse CDF.
  double sample_stationary(std::mt19937_64& rng) const;

  // Stationary density relative to Lebesgue measure (constant) .
  double pi_density() const { return 1.0 / width(); }

 private:
  double lower_, upper_, sigma_;
};

}  // namespace wpr

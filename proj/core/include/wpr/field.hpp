#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wpr/domain.hpp"
#include "wpr/particles.hpp"

namespace wpr {

struct WeightTrajectory;  // weights.hpp; estimation only reads values

enum class FieldInterpolation { PiecewiseConstant, Linear };

// Density estimate versus the stationary measure on a (time slice) x
// (spatial bin) grid. Each stored value is the bin-conditional mean of
// the particle weights; equal bins under the uniform stationary law give
// every bin mass 1/n_bins. Empty bins are filled by linear interpolation
// between the nearest occupied neighbors (flat continuation past the
// outermost occupied bins); their occupancy stays zero.
class FieldEstimate {
 public:
  FieldEstimate(const Domain& domain, std::size_t n_slices,
                std::size_t n_bins,
                FieldInterpolation mode = FieldInterpolation::PiecewiseConstant);

  static FieldEstimate zero(const Domain& domain, std::size_t n_slices,
                            std::size_t n_bins,
                            FieldInterpolation mode =
                                FieldInterpolation::PiecewiseConstant);

  std::size_t n_slices() const { return n_slices_; }
  std::size_t n_bins() const { return n_bins_; }
  const Domain& domain() const { return domain_; }
  FieldInterpolation interpolation() const { return mode_; }

  double value(std::size_t k, std::size_t j) const {
    return values_[k * n_bins_ + j];
  }
  std::uint32_t occupancy(std::size_t k, std::size_t j) const {
    return counts_[k * n_bins_ + j];
  }
  double& value_ref(std::size_t k, std::size_t j) {
    return values_[k * n_bins_ + j];
  }
  std::uint32_t& count_ref(std::size_t k, std::size_t j) {
    return counts_[k * n_bins_ + j];
  }

  double bin_width() const { return domain_.width() / static_cast<double>(n_bins_); }
  double bin_center(std::size_t j) const {
    return domain_.lower() + (static_cast<double>(j) + 0.5) * bin_width();
  }
  double pi_bin() const { return 1.0 / static_cast<double>(n_bins_); }

  // Bin of x; the upper face belongs to the last bin.
  std::size_t bin_index(double x) const;

  // Field value at (slice k, position x) under the configured mode.
  // Piecewise-constant reads the bin value; linear interpolates between
  // bin centers and is flat outside the outermost centers.
  double evaluate(std::size_t k, double x) const;

  std::uint64_t checksum() const;

  const std::vector<double>& values() const { return values_; }

 private:
  Domain domain_;
  std::size_t n_slices_, n_bins_;
  FieldInterpolation mode_;
  std::vector<double> values_;
  std::vector<std::uint32_t> counts_;
};

// Bin-conditional means of weights[i].values[k] over particles with
// positions[i][k] in each bin, for every slice k. paths and weights must
// agree in count and length.
FieldEstimate estimate_field(const std::vector<ParticlePath>& paths,
                             const std::vector<WeightTrajectory>& weights,
                             const Domain& domain, std::size_t n_bins,
                             FieldInterpolation mode =
                                 FieldInterpolation::PiecewiseConstant,
                             std::size_t workers = 1);

// Default bin count: round(N^(1/3)), at least 1.
std::size_t default_bin_count(std::size_t n_particles);

// L1 distance in the stationary measure between two estimates at slice k;
// the estimates must share geometry (domain, bins, slices).
double l1_pi_distance(const FieldEstimate& a, const FieldEstimate& b,
                      std::size_t k);

// Exponential moment probe sum_j exp(eps * v^2) * pi(bin) at slice k.
// Overflow propagates as +inf rather than an error.
double exp_moment_probe(const FieldEstimate& field, double eps, std::size_t k);

}  // namespace wpr

#include "wpr/field.hpp"

#include <cmath>
#include <stdexcept>

#include "wpr/hash.hpp"
#include "wpr/parallel.hpp"
#include "wpr/weights.hpp"

namespace wpr {

FieldEstimate::FieldEstimate(const Domain& domain, std::size_t n_slices,
                             std::size_t n_bins, FieldInterpolation mode)
    : domain_(domain),
      n_slices_(n_slices),
      n_bins_(n_bins),
      mode_(mode),
      values_(n_slices * n_bins, 0.0),
      counts_(n_slices * n_bins, 0) {
  if (n_slices == 0 || n_bins == 0)
    throw std::invalid_argument("FieldEstimate: empty grid");
}

FieldEstimate FieldEstimate::zero(const Domain& domain, std::size_t n_slices,
                                  std::size_t n_bins,
                                  FieldInterpolation mode) {
  return FieldEstimate(domain, n_slices, n_bins, mode);
}

std::size_t FieldEstimate::bin_index(double x) const {
  const double rel = (x - domain_.lower()) / domain_.width();
  auto j = static_cast<long>(rel * static_cast<double>(n_bins_));
  if (j < 0) j = 0;
  const long last = static_cast<long>(n_bins_) - 1;
  if (j > last) j = last;
  return static_cast<std::size_t>(j);
}

double FieldEstimate::evaluate(std::size_t k, double x) const {
  const std::size_t j = bin_index(x);
  if (mode_ == FieldInterpolation::PiecewiseConstant) return value(k, j);

  // Linear: interpolate between the centers bracketing x.
  const double c = bin_center(j);
  std::size_t j0, j1;
  if (x < c) {
    j0 = j == 0 ? 0 : j - 1;
    j1 = j;
  } else {
    j0 = j;
    j1 = j + 1 < n_bins_ ? j + 1 : j;
  }
  if (j0 == j1) return value(k, j0);
  const double c0 = bin_center(j0);
  const double w = (x - c0) / (bin_center(j1) - c0);
  return (1.0 - w) * value(k, j0) + w * value(k, j1);
}

std::uint64_t FieldEstimate::checksum() const { return fnv1a(values_); }

std::size_t default_bin_count(std::size_t n_particles) {
  const double b = std::round(std::cbrt(static_cast<double>(n_particles)));
  return b < 1.0 ? 1 : static_cast<std::size_t>(b);
}

FieldEstimate estimate_field(const std::vector<ParticlePath>& paths,
                             const std::vector<WeightTrajectory>& weights,
                             const Domain& domain, std::size_t n_bins,
                             FieldInterpolation mode, std::size_t workers) {
  if (paths.empty()) throw std::invalid_argument("estimate_field: no particles");
  if (paths.size() != weights.size())
    throw std::invalid_argument("estimate_field: paths/weights size mismatch");
  const std::size_t n_slices = paths[0].positions.size();
  for (const auto& p : paths)
    if (p.positions.size() != n_slices)
      throw std::invalid_argument("estimate_field: ragged path lengths");
  for (const auto& w : weights)
    if (w.values.size() != n_slices)
      throw std::invalid_argument("estimate_field: weight length mismatch");

  FieldEstimate field(domain, n_slices, n_bins, mode);
  const std::size_t n = paths.size();

  // Slices are independent tasks; each accumulates its own bins, so the
  // result is schedule-independent.
  parallel_for(n_slices, workers, [&](std::size_t k) {
    std::vector<double> sum(n_bins, 0.0);
    std::vector<std::uint32_t> cnt(n_bins, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = field.bin_index(paths[i].positions[k]);
      sum[j] += weights[i].values[k];
      cnt[j] += 1;
    }

    // Bin means where occupied; remember occupied indices for the fill.
    long prev = -1;
    for (std::size_t j = 0; j < n_bins; ++j) {
      if (cnt[j] == 0) continue;
      const double mean = sum[j] / static_cast<double>(cnt[j]);
      field.value_ref(k, j) = mean;
      field.count_ref(k, j) = cnt[j];
      if (prev >= 0 && static_cast<std::size_t>(prev) + 1 < j) {
        // Interior gap: linear interpolation between the two means.
        const double left = field.value(k, static_cast<std::size_t>(prev));
        const double span = static_cast<double>(j - prev);
        for (std::size_t g = prev + 1; g < j; ++g)
          field.value_ref(k, g) =
              left + (mean - left) * static_cast<double>(g - prev) / span;
      } else if (prev < 0 && j > 0) {
        // Leading gap: flat continuation of the first occupied bin.
        for (std::size_t g = 0; g < j; ++g) field.value_ref(k, g) = mean;
      }
      prev = static_cast<long>(j);
    }
    if (prev < 0)
      throw std::logic_error("estimate_field: slice with no occupied bin");
    for (std::size_t g = static_cast<std::size_t>(prev) + 1; g < n_bins; ++g)
      field.value_ref(k, g) = field.value(k, static_cast<std::size_t>(prev));
  });

  return field;
}

double l1_pi_distance(const FieldEstimate& a, const FieldEstimate& b,
                      std::size_t k) {
  if (a.n_bins() != b.n_bins() || a.n_slices() != b.n_slices() ||
      a.domain().lower() != b.domain().lower() ||
      a.domain().upper() != b.domain().upper())
    throw std::invalid_argument("l1_pi_distance: estimates live on different grids");
  if (k >= a.n_slices())
    throw std::invalid_argument("l1_pi_distance: slice out of range");
  double sum = 0.0;
  for (std::size_t j = 0; j < a.n_bins(); ++j)
    sum += std::abs(a.value(k, j) - b.value(k, j));
  return sum * a.pi_bin();
}

double exp_moment_probe(const FieldEstimate& field, double eps,
                        std::size_t k) {
  double sum = 0.0;
  for (std::size_t j = 0; j < field.n_bins(); ++j) {
    const double v = field.value(k, j);
    sum += std::exp(eps * v * v);
  }
  return sum * field.pi_bin();
}

}  // namespace wpr

#include "wpr/noise.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "wpr/hash.hpp"

namespace wpr {

namespace {
constexpr char kMagic[8] = {'W', 'P', 'R', 'N', 'O', 'I', 'S', '1'};
}

std::uint64_t NoiseRealization::checksum() const {
  std::uint64_t h = fnv1a(&dt, sizeof dt);
  h = fnv1a(&n_steps, sizeof n_steps, h);
  h = fnv1a(&n_channels, sizeof n_channels, h);
  return fnv1a(increments, h);
}

NoiseRealization NoiseRealization::refined(std::mt19937_64& rng) const {
  NoiseRealization out;
  out.dt = 0.5 * dt;
  out.n_steps = 2 * n_steps;
  out.n_channels = n_channels;
  out.increments.resize(out.n_steps * n_channels);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double half_sd = 0.5 * std::sqrt(dt);
  for (std::size_t k = 0; k < n_steps; ++k) {
    for (std::size_t m = 0; m < n_channels; ++m) {
      const double w = dw(k, m);
      const double first = 0.5 * w + half_sd * gauss(rng);
      out.dw(2 * k, m) = first;
      out.dw(2 * k + 1, m) = w - first;
    }
  }
  return out;
}

NoiseRealization generate_noise(const RngStreams& streams, double dt,
                                std::size_t n_steps,
                                std::size_t n_channels) {
  if (!(dt > 0.0)) throw std::invalid_argument("generate_noise: dt must be positive");
  if (n_steps == 0) throw std::invalid_argument("generate_noise: n_steps must be >= 1");
  if (n_channels == 0)
    throw std::invalid_argument(
        "generate_noise: n_channels must be >= 1 (use zero coefficients for "
        "a noiseless problem)");

  NoiseRealization noise;
  noise.dt = dt;
  noise.n_steps = n_steps;
  noise.n_channels = n_channels;
  noise.increments.resize(n_steps * n_channels);

  auto rng = streams.common();
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sd = std::sqrt(dt);
  for (double& w : noise.increments) w = sd * gauss(rng);
  return noise;
}

NoiseRealization generate_noise(std::uint64_t seed, double dt,
                                std::size_t n_steps,
                                std::size_t n_channels) {
  return generate_noise(RngStreams(seed), dt, n_steps, n_channels);
}

void save_noise(const NoiseRealization& noise, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_noise: cannot open " + path);
  bool ok = std::fwrite(kMagic, sizeof kMagic, 1, f) == 1;
  std::uint64_t k = noise.n_steps, m = noise.n_channels;
  ok = ok && std::fwrite(&noise.dt, sizeof noise.dt, 1, f) == 1;
  ok = ok && std::fwrite(&k, sizeof k, 1, f) == 1;
  ok = ok && std::fwrite(&m, sizeof m, 1, f) == 1;
  if (!noise.increments.empty())
    ok = ok && std::fwrite(noise.increments.data(), sizeof(double),
                           noise.increments.size(),
                           f) == noise.increments.size();
  std::fclose(f);
  if (!ok) throw std::runtime_error("save_noise: short write to " + path);
}

NoiseRealization load_noise(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("load_noise: cannot open " + path);
  char magic[8];
  NoiseRealization noise;
  std::uint64_t k = 0, m = 0;
  bool ok = std::fread(magic, sizeof magic, 1, f) == 1 &&
            std::memcmp(magic, kMagic, sizeof magic) == 0;
  ok = ok && std::fread(&noise.dt, sizeof noise.dt, 1, f) == 1;
  ok = ok && std::fread(&k, sizeof k, 1, f) == 1;
  ok = ok && std::fread(&m, sizeof m, 1, f) == 1;
  if (ok) {
    noise.n_steps = k;
    noise.n_channels = m;
    noise.increments.resize(k * m);
    ok = noise.increments.empty() ||
         std::fread(noise.increments.data(), sizeof(double),
                    noise.increments.size(), f) == noise.increments.size();
  }
  std::fclose(f);
  if (!ok) throw std::runtime_error("load_noise: " + path + " is not a noise dump");
  return noise;
}

double ito_integrate(std::span<const double> positions,
                     const std::vector<ScalarField>& rho,
                     const NoiseRealization& noise, std::size_t from,
                     std::size_t to) {
  if (from > to || to > noise.n_steps)
    throw std::invalid_argument("ito_integrate: window must satisfy from <= to <= n_steps");
  if (positions.size() < to)
    throw std::invalid_argument("ito_integrate: trajectory shorter than window");
  if (rho.size() != noise.n_channels)
    throw std::invalid_argument("ito_integrate: channel count mismatch");

  double sum = 0.0;
  for (std::size_t k = from; k < to; ++k) {
    const double x = positions[k];
    double step = 0.0;
    for (std::size_t m = 0; m < rho.size(); ++m)
      step += rho[m](x) * noise.dw(k, m);
    sum += step;
  }
  return sum;
}

}  // namespace wpr

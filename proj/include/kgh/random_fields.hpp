#pragma once

// Deterministic synthetic data.
//
// All randomness flows through a hand-rolled splitmix64 + Box-Muller pair so
// that outputs are bit-for-bit reproducible for a fixed seed on any host.
// Random fields are built either by transforming i.i.d. pointwise normals
// (whose spectrum is exactly Hermitian complex Gaussian) and shaping with an
// even envelope, or — for the fixed-magnitude power-law family — by filling
// the half-spectrum directly with unit-modulus random phases.

#include <cstdint>
#include <functional>

#include "kgh/field.hpp"

namespace kgh {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();        // [0, 1)
  double gauss();          // standard normal, Box-Muller
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// i.i.d. standard normals at every grid point.
RealField white_noise(const GridSpec& g, Rng& rng);

// Periodized Gaussian bump, synthesized spectrally (no wrap-around seam):
// amplitude * exp(-|x - center|^2 / (2 width^2)) summed over periodic images.
RealField gaussian_bump(const GridSpec& g, double amplitude, double width, const Vec3& center);

// Gaussian-envelope random field with the mean projected out.
RealField random_mean_zero_gaussian(const GridSpec& g, std::uint64_t seed);

// (phi0, phi1) with |phi0_hat(xi)| proportional to (1+|xi|^2)^{-(s+3/2+delta)/2}
// and |phi1_hat| to (1+|xi|^2)^{-(s-1+3/2+delta)/2}; random phases only, so
// every spectral magnitude (hence every norm) is seed-independent.  Spectra
// are truncated to the dealiased band and scaled so that
// ||phi0||_{H^s} + ||phi1||_{H^{s-1}} = 1.
CauchyPair power_law_pair(const GridSpec& g, double s, double delta, std::uint64_t seed);

// Hermitian complex-Gaussian data shaped by an even envelope(xi), truncated
// to the dealiased band.
RealField envelope_random_field(const GridSpec& g, const std::function<double(const Vec3&)>& envelope,
                                Rng& rng);

}  // namespace kgh

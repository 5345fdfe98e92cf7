#include "kgh/random_fields.hpp"

#include <cmath>

#include "kgh/spectral_ops.hpp"
#include "kgh/transform.hpp"

namespace kgh {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
}

// Order-independent per-mode hash used for reproducible random phases.
std::uint64_t mode_hash(std::uint64_t seed, int ix, int iy, int iz) {
  std::uint64_t s = seed ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) |
                            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy)) << 21) |
                            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(iz)) << 42));
  std::uint64_t h = splitmix64(s);
  return splitmix64(s) ^ h;
}

}  // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() { return unit_double(next_u64()); }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gauss() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u = uniform();
  const double v = uniform();
  const double radius = std::sqrt(-2.0 * std::log1p(-u));  // log(1-u), u < 1
  const double angle = 2.0 * M_PI * v;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

RealField white_noise(const GridSpec& g, Rng& rng) {
  std::vector<double> values(static_cast<std::size_t>(g.point_count()));
  for (double& v : values) v = rng.gauss();
  return RealField(g, std::move(values));
}

RealField gaussian_bump(const GridSpec& g, double amplitude, double width, const Vec3& center) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_bump: width must be positive");
  auto spec = std::make_shared<SpectrumData>(
      SpectrumData{g, std::vector<Complex>(static_cast<std::size_t>(spectrum_size(g)))});
  const double w3 = width * width * width;
  const int n = g.n();
  for_each_mode(g, [&](std::int64_t idx, const Vec3& xi, int) {
    const double mag = amplitude * w3 * std::exp(-0.5 * width * width * xi.norm2());
    const double phase = -dot(center, xi);
    Complex c(mag * std::cos(phase), mag * std::sin(phase));
    // Self-conjugate modes (all components 0 or Nyquist) must be real; the
    // sampled continuum transform has a negligible imaginary residue there.
    const double spacing = g.xi_spacing();
    const double nyq = spacing * (n / 2);
    auto self_paired = [&](double comp) { return comp == 0.0 || std::abs(std::abs(comp) - nyq) < 0.5 * spacing; };
    if (self_paired(xi.x) && self_paired(xi.y) && self_paired(xi.z)) c = Complex(c.real(), 0.0);
    spec->coeff[static_cast<std::size_t>(idx)] = c;
  });
  return inverse_transform(spec);
}

RealField random_mean_zero_gaussian(const GridSpec& g, std::uint64_t seed) {
  Rng rng(seed);
  const double L = g.box_length();
  const double amplitude = rng.uniform(0.5, 2.0);
  const double width = rng.uniform(L / 12.0, L / 5.0);
  const Vec3 center{rng.uniform(0.0, L), rng.uniform(0.0, L), rng.uniform(0.0, L)};
  RealField bump = gaussian_bump(g, amplitude, width, center);
  const double m = mean_value(bump);
  std::vector<double> values(bump.values());
  for (double& v : values) v -= m;
  return RealField(g, std::move(values));
}

namespace {

// Fill a half-spectrum with magnitude envelope(xi) and reproducible random
// phases, exactly Hermitian.  Phases are derived from an order-independent
// hash of the canonical representative of each conjugate pair {k, -k}.
SpectrumPtr phase_randomized_spectrum(const GridSpec& g,
                                      const std::function<double(const Vec3&)>& envelope,
                                      std::uint64_t seed) {
  const int n = g.n();
  auto spec = std::make_shared<SpectrumData>(
      SpectrumData{g, std::vector<Complex>(static_cast<std::size_t>(spectrum_size(g)))});
  auto mirror = [n](int i) { return (n - i) % n; };
  const int nh = n / 2 + 1;
  std::int64_t idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < nh; ++ix, ++idx) {
        const Vec3 xi{g.xi_spacing() * ix, g.xi_spacing() * g.signed_index(iy),
                      g.xi_spacing() * g.signed_index(iz)};
        const double mag = envelope(xi);
        if (mag == 0.0) continue;
        const int mx = mirror(ix), my = mirror(iy), mz = mirror(iz);
        const bool self = (mx == ix && my == iy && mz == iz);
        if (self) {
          const double sign = (mode_hash(seed, ix, iy, iz) & 1ull) ? -1.0 : 1.0;
          spec->coeff[static_cast<std::size_t>(idx)] = Complex(sign * mag, 0.0);
          continue;
        }
        // Canonical member of {k, -k}: lexicographically smaller index triple.
        const bool canonical =
            std::tuple(iz, iy, ix) < std::tuple(mz, my, mx);
        const auto [cz, cy, cx] = canonical ? std::tuple(iz, iy, ix) : std::tuple(mz, my, mx);
        const double theta = 2.0 * M_PI * unit_double(mode_hash(seed, cx, cy, cz));
        const double sgn = canonical ? 1.0 : -1.0;
        spec->coeff[static_cast<std::size_t>(idx)] =
            Complex(mag * std::cos(theta), sgn * mag * std::sin(theta));
      }
    }
  }
  return spec;
}

double spectrum_sobolev(const SpectrumData& s, double exponent) {
  double acc = 0.0;
  for_each_mode(s.grid, [&](std::int64_t idx, const Vec3& xi, int mult) {
    acc += mult * std::pow(1.0 + xi.norm2(), exponent) *
           std::norm(s.coeff[static_cast<std::size_t>(idx)]);
  });
  return std::sqrt(acc * s.grid.mode_weight());
}

}  // namespace

CauchyPair power_law_pair(const GridSpec& g, double s, double delta, std::uint64_t seed) {
  const double band = g.dealias_band();
  auto envelope = [band](double decay) {
    return [band, decay](const Vec3& xi) {
      if (xi.norm() > band) return 0.0;
      return std::pow(1.0 + xi.norm2(), -0.5 * decay);
    };
  };
  auto spec0 = phase_randomized_spectrum(g, envelope(s + 1.5 + delta), seed);
  auto spec1 = phase_randomized_spectrum(g, envelope(s - 1.0 + 1.5 + delta), seed ^ 0xa5a5a5a5a5a5a5a5ull);

  const double es = spectrum_sobolev(*spec0, s) + spectrum_sobolev(*spec1, s - 1.0);
  const double scale = es > 0.0 ? 1.0 / es : 1.0;
  auto scaled = [scale](const SpectrumData& in) {
    auto out = std::make_shared<SpectrumData>(in);
    for (Complex& c : out->coeff) c *= scale;
    return out;
  };
  return CauchyPair(inverse_transform(scaled(*spec0)), inverse_transform(scaled(*spec1)));
}

RealField envelope_random_field(const GridSpec& g,
                                const std::function<double(const Vec3&)>& envelope, Rng& rng) {
  RealField noise = white_noise(g, rng);
  const double band = g.dealias_band();
  auto spec = apply_multiplier(forward_transform(noise), [&](const Vec3& xi) {
    return xi.norm() > band ? 0.0 : envelope(xi);
  });
  return inverse_transform(spec);
}

}  // namespace kgh

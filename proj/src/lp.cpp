#include "kgh/lp.hpp"

#include <cmath>

#include "kgh/spectral_ops.hpp"
#include "kgh/transform.hpp"

namespace kgh {

namespace {

// C-infinity step sigma: 0 at u<=0, 1 at u>=1, a(u)=e^{-1/u} glue.
double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

constexpr double kLo = 0.75;        // transition start
constexpr double kHi = 4.0 / 3.0;   // transition end

// Radial step g: 1 on [0, 3/4], 0 on [4/3, inf).
double radial_step(double t) {
  if (t <= kLo) return 1.0;
  if (t >= kHi) return 0.0;
  return 1.0 - smoothstep((t - kLo) / (kHi - kLo));
}

}  // namespace

double chi_profile(double t) { return radial_step(std::abs(t)); }

double phi_profile(double t) {
  const double u = std::abs(t);
  return radial_step(0.5 * u) - radial_step(u);
}

DyadicBank DyadicBank::build(const GridSpec& grid) {
  const double band = grid.dealias_band();
  const int j_max = static_cast<int>(std::floor(std::log2(band * 3.0 / 8.0)));
  if (j_max < 2)
    throw std::invalid_argument(
        "DyadicBank: grid resolves fewer than three dyadic blocks (j_max < 2); "
        "refine n or shrink the box");

  // Smallest level whose annulus 2^j [3/4, 8/3] reaches the first nonzero
  // lattice shell |xi| = 2*pi/L.
  const double xi0 = grid.xi_spacing();
  int j_min = static_cast<int>(std::ceil(std::log2(xi0 * 3.0 / 8.0)));
  while (phi_profile(std::ldexp(xi0, -j_min)) == 0.0 && j_min < j_max) ++j_min;
  return DyadicBank(grid, j_max, j_min);
}

SpectrumPtr DyadicBank::block(const SpectrumPtr& s, int j) const {
  require_same_grid(s->grid, grid_, "DyadicBank::block");
  if (j > j_max_)
    throw std::invalid_argument("DyadicBank::block: j exceeds j_max (block would alias)");
  if (j <= -2) {
    auto zero = std::make_shared<SpectrumData>(
        SpectrumData{grid_, std::vector<Complex>(s->coeff.size(), Complex(0.0))});
    return zero;
  }
  if (j == -1) return apply_multiplier(s, [](const Vec3& xi) { return chi_profile(xi.norm()); });
  const double scale = std::ldexp(1.0, -j);
  return apply_multiplier(s, [scale](const Vec3& xi) { return phi_profile(scale * xi.norm()); });
}

SpectrumPtr DyadicBank::low_pass(const SpectrumPtr& s, int j) const {
  require_same_grid(s->grid, grid_, "DyadicBank::low_pass");
  if (j > j_max_)
    throw std::invalid_argument("DyadicBank::low_pass: j exceeds j_max");
  if (j < 0) {
    auto zero = std::make_shared<SpectrumData>(
        SpectrumData{grid_, std::vector<Complex>(s->coeff.size(), Complex(0.0))});
    return zero;
  }
  const double scale = std::ldexp(1.0, -j);
  return apply_multiplier(s, [scale](const Vec3& xi) { return chi_profile(scale * xi.norm()); });
}

RealField DyadicBank::block(const RealField& f, int j) const {
  return inverse_transform(block(forward_transform(f), j));
}

RealField DyadicBank::low_pass(const RealField& f, int j) const {
  return inverse_transform(low_pass(forward_transform(f), j));
}

double besov_norm(const DyadicBank& bank, const RealField& f, const BesovParams& params) {
  if (!(params.p >= 1.0) || !(params.q >= 1.0))
    throw std::invalid_argument("besov_norm: p and q must satisfy p, q >= 1");
  auto spec = forward_transform(f);

  const int j_lo = params.homogeneous ? bank.j_min_resolved() : 0;
  double sum = 0.0, sup = 0.0;
  for (int j = j_lo; j <= bank.j_max(); ++j) {
    const double block_norm = lebesgue_norm(inverse_transform(bank.block(spec, j)), params.p);
    const double weighted = std::pow(2.0, j * params.s) * block_norm;
    if (std::isinf(params.q))
      sup = std::max(sup, weighted);
    else
      sum += std::pow(weighted, params.q);
  }
  double dyadic = std::isinf(params.q) ? sup : std::pow(sum, 1.0 / params.q);
  if (params.homogeneous) return dyadic;
  return dyadic + lebesgue_norm(inverse_transform(bank.low_pass(spec, 0)), params.p);
}

RealField ball_localize(const DyadicBank& bank, const RealField& f, const BallWindow& window) {
  require_same_grid(f.grid(), bank.grid(), "ball_localize");
  if (!(window.h > 0.0) || !(window.h < 0.125))
    throw std::invalid_argument("ball_localize: h must lie in (0, 1/8)");
  const double c = window.center.norm();
  const double lo = std::ldexp(1.0, window.j - 2);
  const double hi = std::ldexp(1.0, window.j + 2);
  if (!(c >= lo) || !(c <= hi))
    throw std::invalid_argument("ball_localize: |center| must lie in [2^{j-2}, 2^{j+2}]");
  const double radius = window.h * std::ldexp(1.0, window.j);
  if (c + radius > bank.grid().dealias_band())
    throw std::invalid_argument("ball_localize: ball extends beyond the dealiased band");

  const Vec3 center = window.center;
  return apply_multiplier(f, [center, radius](const Vec3& xi) {
    const double d_plus = (xi - center).norm();
    const double d_minus = (xi + center).norm();
    return (d_plus <= radius || d_minus <= radius) ? 1.0 : 0.0;
  });
}

std::optional<double> bernstein_ratio(const DyadicBank& bank, const RealField& f, int j, double p,
                                      double q) {
  if (!(p >= 1.0) || !(q >= p))
    throw std::invalid_argument("bernstein_ratio: need 1 <= p <= q");
  RealField blk = bank.block(f, j);
  const double denom_norm = lebesgue_norm(blk, p);
  // An annulus that carries only transform round-off (relative to the whole
  // field) counts as empty: the ratio would be noise over noise.
  if (denom_norm <= 1e-13 * lebesgue_norm(f, p)) return std::nullopt;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  const double gain = std::pow(2.0, 3.0 * j * (ip - iq));
  return lebesgue_norm(blk, q) / (gain * denom_norm);
}

}  // namespace kgh

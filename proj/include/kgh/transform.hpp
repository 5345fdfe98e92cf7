#pragma once

// Discrete Fourier transforms with the continuum-approximating convention
//
//   chat(xi_k) = (2*pi)^{-3/2} * (L/n)^3 * sum_x e^{-i x.xi_k} f(x),
//
// i.e. the rectangle-rule approximation of f_hat(xi)=(2pi)^{-3/2} Int e^{-ix.xi} f dx.
// With the companion mode weight (2*pi/L)^3, Parseval is exact on the grid:
//   sum_x |f|^2 (L/n)^3 = sum_k mult(k) |chat_k|^2 (2pi/L)^3.
//
// Half-complex (r2c) storage: index (iz, iy, ix) with ix in [0, n/2]; modes
// with 0 < ix < n/2 stand for a conjugate pair (multiplicity 2).

#include <functional>

#include "kgh/field.hpp"

namespace kgh {

SpectrumPtr forward_transform(const RealField& f);
RealField inverse_transform(const SpectrumPtr& s);

// Iterate stored modes: fn(flat_index, xi, multiplicity).
template <class Fn>
void for_each_mode(const GridSpec& g, Fn&& fn) {
  const int n = g.n();
  const int nh = n / 2 + 1;
  const double w = g.xi_spacing();
  std::int64_t idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    const double kz = g.signed_index(iz);
    for (int iy = 0; iy < n; ++iy) {
      const double ky = g.signed_index(iy);
      for (int ix = 0; ix < nh; ++ix, ++idx) {
        const int mult = (ix == 0 || ix == n / 2) ? 1 : 2;
        fn(idx, Vec3{w * ix, w * ky, w * kz}, mult);
      }
    }
  }
}

// sum_k mult(k) * fn(xi_k, c_k); used for all spectral quadratures.
double spectral_sum(const SpectrumData& s,
                    const std::function<double(const Vec3&, const Complex&)>& fn);

}  // namespace kgh

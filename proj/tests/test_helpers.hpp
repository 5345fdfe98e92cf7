#pragma once

// Shared helpers for the test binaries: trigonometric reference fields and
// elementwise comparisons, independent of the library's spectral code paths.

#include <array>
#include <cmath>
#include <vector>

#include "kgh/field.hpp"

namespace kgh_test {

// f(x) = sum_m amp[m] * cos(xi_m . x) with xi_m = (2pi/L) k[m], sampled on
// the grid: the phase at sample (ix,iy,iz) is (2pi/n)(k0 ix + k1 iy + k2 iz).
inline kgh::RealField cosine_sum(const kgh::GridSpec& g,
                                 const std::vector<std::array<int, 3>>& k,
                                 const std::vector<double>& amp) {
  const int n = g.n();
  const double step = 2.0 * M_PI / n;
  std::vector<double> v(static_cast<std::size_t>(g.point_count()));
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix, ++idx) {
        double s = 0.0;
        for (std::size_t m = 0; m < k.size(); ++m)
          s += amp[m] * std::cos(step * (k[m][0] * ix + k[m][1] * iy + k[m][2] * iz));
        v[idx] = s;
      }
  return kgh::RealField(g, std::move(v));
}

inline double max_abs_diff(const kgh::RealField& a, const kgh::RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

inline double max_abs(const kgh::RealField& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace kgh_test

#pragma once

// Periodic sampling grid for the cubic box [0, L)^3.
//
// The box is discretized with n samples per axis (uniform spacing L/n), so
// the resolvable wavevectors are xi = (2*pi/L) * k with integer k in
// [-n/2, n/2) per component.  The Nyquist magnitude per axis is
// (2*pi/L) * n/2, and the 2/3-rule dealiased band keeps |k_i| <= n/3.
//
// The interaction exponent gamma of the |x|^{-gamma} coupling lives here as
// well: every downstream operator needs (n, L, gamma) together and the
// triple is validated once.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace kgh {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double norm2() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double c, const Vec3& v) { return {c * v.x, c * v.y, c * v.z}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

class GridSpec {
 public:
  GridSpec(int n, double box_length, double gamma)
      : n_(n), box_length_(box_length), gamma_(gamma) {
    if (n < 8 || (n & (n - 1)) != 0)
      throw std::invalid_argument("GridSpec: n must be a power of two with n >= 8");
    if (!(box_length > 0.0) || !std::isfinite(box_length))
      throw std::invalid_argument("GridSpec: box length must be positive and finite");
    if (!(gamma > 2.0) || !(gamma < 3.0))
      throw std::invalid_argument("GridSpec: gamma must lie in the open interval (2, 3)");
  }

  int n() const { return n_; }
  double box_length() const { return box_length_; }
  double gamma() const { return gamma_; }

  std::int64_t point_count() const {
    return static_cast<std::int64_t>(n_) * n_ * n_;
  }

  // Lattice spacing in frequency space and the per-axis Nyquist magnitude.
  double xi_spacing() const { return 2.0 * M_PI / box_length_; }
  double nyquist() const { return xi_spacing() * (n_ / 2); }

  // Radial extent of the 2/3-rule dealiased band.  Lattice points with
  // |xi| <= dealias_band() automatically have every component below the
  // per-axis cutoff as well.
  double dealias_band() const { return nyquist() * (2.0 / 3.0); }

  // Quadrature weights: rectangle rule cell volume in x, lattice cell
  // volume in xi (exact Parseval companion of the forward normalization).
  double cell_volume() const {
    double h = box_length_ / n_;
    return h * h * h;
  }
  double mode_weight() const {
    double w = xi_spacing();
    return w * w * w;
  }

  // Signed integer frequency for a storage index along one axis.
  int signed_index(int i) const { return i <= n_ / 2 ? i : i - n_; }

  bool operator==(const GridSpec& o) const {
    return n_ == o.n_ && box_length_ == o.box_length_ && gamma_ == o.gamma_;
  }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }

 private:
  int n_;
  double box_length_;
  double gamma_;
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* who) {
  if (a != b) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace kgh

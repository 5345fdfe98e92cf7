#pragma once

// Real scalar fields on the periodic grid, plus Cauchy data pairs.
//
// Storage is row-major with x fastest: values[(z*n + y)*n + x].  A field may
// carry its half-complex spectrum (r2c layout, see transform.hpp); the cache
// is attached at construction time only and never mutated, so fields are
// safe to share across threads.  When present it equals the forward
// transform of the values to round-off.

#include <complex>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kgh/grid.hpp"

namespace kgh {

using Complex = std::complex<double>;

// Half-complex spectrum: dims n x n x (n/2+1), ordered (z, y, x), x fastest.
// Coefficients are the normalized ones: chat(xi) = (2pi)^{-3/2} (L/n)^3 * DFT.
struct SpectrumData {
  GridSpec grid;
  std::vector<Complex> coeff;
};

using SpectrumPtr = std::shared_ptr<const SpectrumData>;

inline std::int64_t spectrum_size(const GridSpec& g) {
  return static_cast<std::int64_t>(g.n()) * g.n() * (g.n() / 2 + 1);
}

class RealField {
 public:
  explicit RealField(GridSpec grid)
      : grid_(grid), values_(static_cast<std::size_t>(grid.point_count()), 0.0) {}

  RealField(GridSpec grid, std::vector<double> values, SpectrumPtr spectrum = nullptr)
      : grid_(grid), values_(std::move(values)), spectrum_(std::move(spectrum)) {
    if (static_cast<std::int64_t>(values_.size()) != grid_.point_count())
      throw std::invalid_argument("RealField: value count does not match grid");
    if (spectrum_ && static_cast<std::int64_t>(spectrum_->coeff.size()) != spectrum_size(grid_))
      throw std::invalid_argument("RealField: cached spectrum size mismatch");
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() {
    spectrum_.reset();  // cache would go stale
    return values_;
  }

  const SpectrumPtr& cached_spectrum() const { return spectrum_; }

  RealField without_cache() const { return RealField(grid_, values_); }

  double operator[](std::size_t i) const { return values_[i]; }

 private:
  GridSpec grid_;
  std::vector<double> values_;
  SpectrumPtr spectrum_;
};

// Cauchy data (phi, phi_t) at a common time stamp.
struct CauchyPair {
  RealField position;
  RealField velocity;
  double time_stamp = 0.0;

  CauchyPair(RealField pos, RealField vel, double t = 0.0)
      : position(std::move(pos)), velocity(std::move(vel)), time_stamp(t) {
    require_same_grid(position.grid(), velocity.grid(), "CauchyPair");
  }

  const GridSpec& grid() const { return position.grid(); }

  static CauchyPair zero(const GridSpec& g) { return CauchyPair(RealField(g), RealField(g)); }
};

// --- pointwise arithmetic (grid-checked) ---------------------------------

RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double c, const RealField& f);
RealField pointwise_product(const RealField& a, const RealField& b);

CauchyPair operator+(const CauchyPair& a, const CauchyPair& b);
CauchyPair operator-(const CauchyPair& a, const CauchyPair& b);
CauchyPair operator*(double c, const CauchyPair& p);

}  // namespace kgh

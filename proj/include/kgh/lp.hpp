#pragma once

// Dyadic frequency decomposition.
//
// Radial cutoff profiles built by telescoping a C-infinity step g:
//   g = 1 on [0, 3/4], smooth decrease on (3/4, 4/3), 0 on [4/3, inf),
//   chi(xi) := g(|xi|),   phi(xi) := g(|xi|/2) - g(|xi|).
// Then supp chi in {|xi| <= 4/3}, supp phi in {3/4 <= |xi| <= 8/3}, phi = 1
// on [4/3, 3/2], phi(2^{-j} xi) and phi(2^{-j'} xi) have disjoint supports
// for |j - j'| >= 2, and the partition telescopes exactly:
//   chi(xi) + sum_{j=0..m} phi(2^{-j} xi) = g(2^{-(m+1)} |xi|) -> 1.
//
// Blocks: Delta_j = 0 for j <= -2, the chi multiplier for j = -1, and the
// phi(2^{-j} xi) multiplier for 0 <= j <= j_max, where
//   j_max = floor(log2(Nyquist * (2/3) * (3/8)))
// so that every active annulus 2^j [3/4, 8/3] sits below the dealiased band.
// Partial sums: S_j = sum_{j' <= j-1} Delta_{j'}; the telescoping makes
// S_j a single smooth low-pass, S_j = chi(2^{-j} xi) for j >= 0.

#include <optional>

#include "kgh/field.hpp"

namespace kgh {

double chi_profile(double t);  // radial chi at |xi| = t
double phi_profile(double t);  // radial phi at |xi| = t

class DyadicBank {
 public:
  static DyadicBank build(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  int j_max() const { return j_max_; }

  // Frequencies below partition_band() are reproduced exactly by
  // sum_{j=-1..j_max} Delta_j (the telescoped low-pass is 1 there).
  double partition_band() const { return 1.5 * std::pow(2.0, j_max_); }

  RealField block(const RealField& f, int j) const;     // Delta_j f
  RealField low_pass(const RealField& f, int j) const;  // S_j f
  SpectrumPtr block(const SpectrumPtr& s, int j) const;
  SpectrumPtr low_pass(const SpectrumPtr& s, int j) const;

  // Smallest j whose annulus still contains a nonzero lattice point; used by
  // the homogeneous Besov sum.
  int j_min_resolved() const { return j_min_; }

 private:
  DyadicBank(GridSpec grid, int j_max, int j_min)
      : grid_(grid), j_max_(j_max), j_min_(j_min) {}

  GridSpec grid_;
  int j_max_;
  int j_min_;
};

struct BesovParams {
  double s;
  double p;            // spatial integrability, may be INFINITY
  double q;            // dyadic summability, may be INFINITY
  bool homogeneous = false;
};

// Inhomogeneous: (sum_{j>=0} 2^{jsq} ||Delta_j f||_p^q)^{1/q} + ||S_0 f||_p.
// Homogeneous: the same dyadic sum over every grid-resolved level
// j in [j_min_resolved, j_max] with no low-pass term.
double besov_norm(const DyadicBank& bank, const RealField& f, const BesovParams& params);

// Sharp frequency ball of radius h * 2^j about `center`, applied together
// with its mirror image about -center (fields are real, so the spectrum is
// conjugate-symmetric and a single off-center ball cannot carry a nonzero
// real field).  Requires |center| in [2^{j-2}, 2^{j+2}], 0 < h < 1/8, and
// the ball inside the dealiased band.
struct BallWindow {
  Vec3 center;
  int j;
  double h;
};

RealField ball_localize(const DyadicBank& bank, const RealField& f, const BallWindow& window);

// || Delta_j f ||_q / ( 2^{3j(1/p - 1/q)} || Delta_j f ||_p ) for p <= q.
// Empty block -> no ratio.
std::optional<double> bernstein_ratio(const DyadicBank& bank, const RealField& f, int j, double p,
                                      double q);

}  // namespace kgh

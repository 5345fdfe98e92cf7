#pragma once

// Fourier multipliers, the Riesz-type coupling operator, and grid norms.
//
// The nonlocal coupling I = (-Delta)^{(gamma-3)/2} acts as the multiplier
// |xi|^{gamma-3} with the zero mode mapped to 0 (mean projected out); this
// is the canonical negative-order realization of the |x|^{-gamma}
// convolution on the torus.  Since gamma < 3 the exponent is negative, so
// the operator is smoothing and the zero-mode convention is the only
// consistent choice.

#include <functional>
#include <optional>

#include "kgh/field.hpp"
#include "kgh/transform.hpp"

namespace kgh {

// Multiplier application m(xi) on the half-spectrum.  A real m acts as its
// even extension (the r2c layout pairs each stored mode with its conjugate
// mirror), so real multipliers always return real fields.  A complex m is
// applied to the stored half-spectrum, which realizes the Hermitian
// symmetrization of the operator: the imaginary residue is symmetrized away.
// Non-finite multiplier values at any grid wavevector are rejected.
RealField apply_multiplier(const RealField& f, const std::function<double(const Vec3&)>& m);
RealField apply_multiplier_complex(const RealField& f,
                                   const std::function<Complex(const Vec3&)>& m);
SpectrumPtr apply_multiplier(const SpectrumPtr& s, const std::function<double(const Vec3&)>& m);

struct RieszDiagnostics {
  double mean_fraction = 0.0;  // |mean| * L^{3/2} / ||f||_2
  bool flagged = false;        // mean_fraction > 1e-10
};

// I f via |xi|^{gamma-3}, zero mode -> 0.  The optional diagnostics report
// inputs whose projected-out mean is not negligible.
RealField riesz_potential(const RealField& f, double gamma, RieszDiagnostics* diag = nullptr);

// Rectangle-rule Lebesgue norm; r = infinity gives max |f|.  r must be >= 1.
double lebesgue_norm(const RealField& f, double r);

// Spectral Sobolev norm sqrt( sum mult (1+|xi|^2)^s |chat|^2 (2pi/L)^3 ).
double sobolev_norm(const RealField& f, double s);

// (||phi||_{H^s}, ||phi_t||_{H^{s-1}}).
std::pair<double, double> sobolev_norm(const CauchyPair& p, double s);

// Homogeneous H^1 seminorm ||grad f||_2.
double gradient_l2(const RealField& f);

// L^2 pairing <f, g> by the rectangle rule.
double inner_product(const RealField& f, const RealField& g);

double mean_value(const RealField& f);

// Projection onto the 2/3-rule band: zero every mode with any |k_i| > n/3.
RealField dealias_truncate(const RealField& f);
SpectrumPtr dealias_truncate(const SpectrumPtr& s);

}  // namespace kgh

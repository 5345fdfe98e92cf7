#pragma once

// Exact free Klein-Gordon flow, the Duhamel kernel integral, the
// theta-parameterized admissible exponent lattice, and mixed space-time
// norms with dispersive-decay probes.
//
// Per wavevector, with omega = sqrt(1 + |xi|^2), the free flow rotates
//   phi_hat(t)   =  cos(t om) phi0_hat + (sin(t om)/om) phi1_hat,
//   phid_hat(t)  = -om sin(t om) phi0_hat + cos(t om) phi1_hat,
// so |phid_hat|^2 + om^2 |phi_hat|^2 is conserved mode by mode.  The kernel
// K(t) = sin(t sqrt(I - Laplace)) / sqrt(I - Laplace) drives the Duhamel
// integral w(t) = Int_0^t K(t - tau) f(tau) dtau, evaluated either directly
// (composite trapezoid) or as a running pair series that advances (w, w_t)
// one step per sample — the two agree to round-off by the group property.

#include <optional>
#include <string>
#include <vector>

#include "kgh/field.hpp"
#include "kgh/lp.hpp"

namespace kgh {

// --- admissible exponent triples ------------------------------------------

struct AdmissibleTriple {
  double q = 2.0;
  double r = 2.0;
  double theta = 0.0;
};

// True iff q, r >= 2, theta in [0,1], (q,r,theta) != (2,inf,0), and
// 1/q + (2+theta)/(2r) <= (2+theta)/4.  The inequality is decided in the
// cross-multiplied form 4r + 2q(2+theta) <= q r (2+theta) (with the infinite
// branches resolved symbolically), so boundary cases on rational grids are
// exact.
bool validate_admissible(double q, double r, double theta);

// --- trajectories ----------------------------------------------------------

// Uniformly sampled, time-ordered Cauchy pairs on one grid.
class Trajectory {
 public:
  explicit Trajectory(std::vector<CauchyPair> samples, std::string scheme = "");

  const GridSpec& grid() const { return samples_.front().grid(); }
  std::size_t size() const { return samples_.size(); }
  const CauchyPair& operator[](std::size_t k) const { return samples_[k]; }
  const CauchyPair& front() const { return samples_.front(); }
  const CauchyPair& back() const { return samples_.back(); }
  double dt() const { return dt_; }
  double start_time() const { return samples_.front().time_stamp; }
  double end_time() const { return samples_.back().time_stamp; }
  double horizon() const { return end_time() - start_time(); }
  const std::string& scheme() const { return scheme_; }

  // Sample at time t: exact sample when t hits a stamp (to 1e-9 dt), linear
  // interpolation in between; t outside the covered window is rejected.
  CauchyPair at_time(double t) const;

 private:
  std::vector<CauchyPair> samples_;
  double dt_;
  std::string scheme_;
};

// --- free flow and the Duhamel kernel --------------------------------------

CauchyPair free_flow(const CauchyPair& data, double t);

// Samples free_flow at data.time_stamp + k dt for k = 0..T/dt (T/dt must be
// integral to 1e-9); each sample rotates the initial spectra directly, so no
// step-compounding error accrues.
Trajectory free_trajectory(const CauchyPair& data, double dt, double T);

// K(t) f.
RealField wave_kernel(const RealField& f, double t);

// Int_0^t K(t - tau) f(tau) dtau by composite trapezoid over the uniform
// samples forcing[k] = f(k dt); t must land on a sample (to 1e-9) and stay
// within the forcing horizon.
RealField duhamel(const std::vector<RealField>& forcing, double dt, double t);

// The whole family w(t_k) = Int_0^{t_k} K(t_k - tau) f(tau) dtau at once,
// with the time derivatives riding along: the pair (w, w_t) is advanced by
// one free-flow step plus trapezoid halves of (0, f) per sample.  Costs O(M)
// transforms for M samples and agrees with `duhamel` at every index.
Trajectory duhamel_series(const std::vector<RealField>& forcing, double dt);

// --- mixed space-time norms -------------------------------------------------

struct SpaceTimeNormRecord {
  double q = 0.0;
  double r = 0.0;
  double value = 0.0;
  double dt = 0.0;
  double T = 0.0;
};

// ( Int_0^T ||phi(t)||_{L^r}^q dt )^{1/q} by trapezoid over the samples'
// position fields; q = infinity takes the max over samples.
SpaceTimeNormRecord spacetime_norm(const Trajectory& traj, double q, double r);

// Finite approximation of the dispersive resolution norm at regularity mu:
// the max of sup_t ||phi(t)||_{H^mu} and, for every triple, the mixed norm
// L^q_t(B^sigma_{r,2}) with sigma = mu + 1/q - (3+theta)(1/2 - 1/r).
double resolution_norm(const DyadicBank& bank, const Trajectory& traj, double mu,
                       const std::vector<AdmissibleTriple>& triples);

// --- dispersive-decay probes -------------------------------------------------

// || u ||_{L^q(L^r)} of the free evolution of block-localized data, divided
// by 2^{j((3+theta)/2 - (3+theta)/r - 1/q)} (||u0||_2 + 2^{-j} ||u1||_2).
// Zero data has no ratio.
std::optional<double> strichartz_ratio(const CauchyPair& data, int j, const AdmissibleTriple& triple,
                                       double dt, double T);

struct PreciseSlopeResult {
  double slope = 0.0;          // mean over trials of the per-trial LSQ slope
  double fit_residual = 0.0;   // mean RMS residual of those fits
  std::vector<double> trial_slopes;
  Vec3 center;                 // ball center used at every radius
};

// Ball-concentration decay probe: random data localized to the frequency
// ball B(center, h 2^j) (paired with its mirror) for each h in h_list,
// evolved freely over [0, T], measured in L^q(L^r) with q on the sharp
// theta = 0 admissibility line (1/q = 1/2 - 1/r), normalized by
// 2^{j(3/2 - 3/r - 1/q)} (||u0||_2 + 2^{-j} ||u1||_2); returns the fitted
// slope of log(norm) against log(h), averaged over `trials` independently
// seeded draws.  Decay like h^{1/2 - 1/r} is the concentration-gain target.
// Requires at least three radii, each h < 1/8, and T <= L/4 so the window
// stays clear of wrap-around.
PreciseSlopeResult precise_strichartz_slope(const DyadicBank& bank, int j, double r,
                                            const std::vector<double>& h_list, int trials,
                                            double dt, double T, std::uint64_t seed);

}  // namespace kgh

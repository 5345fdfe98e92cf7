#include "kgh/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kgh/dynamics.hpp"
#include "kgh/random_fields.hpp"
#include "kgh/spectral_ops.hpp"
#include "kgh/splitting.hpp"

namespace kgh {

namespace {

void require_gamma(double gamma, const char* where) {
  if (!(gamma > 2.0 && gamma < 3.0))
    throw std::invalid_argument(std::string(where) + ": gamma must lie in (2, 3)");
}

RealField truncated_product(const RealField& a, const RealField& b) {
  return dealias_truncate(pointwise_product(a, b));
}

// Trapezoid weights over the samples of `traj` with time_stamp <= T; the
// count of participating samples is returned through `used`.
std::vector<double> trapezoid_weights(const Trajectory& traj, double T, std::size_t& used) {
  used = 0;
  while (used < traj.size() && traj[used].time_stamp <= traj.start_time() + T + 1e-9) ++used;
  if (used < 2)
    throw std::invalid_argument("probe quadrature: need at least two samples within [0, T]");
  std::vector<double> w(used, traj.dt());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

}  // namespace

void finalize_probe_report(ProbeReport& report) {
  if (report.ratios.empty())
    throw std::invalid_argument("finalize_probe_report: empty ratio sweep");
  for (double ratio : report.ratios)
    if (!(std::isfinite(ratio) && ratio >= 0.0))
      throw std::invalid_argument("finalize_probe_report: ratios must be finite and nonnegative");
  const auto [lo, hi] = std::minmax_element(report.ratios.begin(), report.ratios.end());
  report.min = *lo;
  report.max = *hi;
  report.maxmin_ratio =
      report.min > 0.0 ? report.max / report.min : std::numeric_limits<double>::infinity();
}

// --- fractional potential Lebesgue bound ------------------------------------

double hls_exponent(double p, double gamma) {
  require_gamma(gamma, "hls_exponent");
  if (!(std::isfinite(p) && p > 1.0))
    throw std::invalid_argument("hls_exponent: need 1 < p < infinity");
  const double inv_q = 1.0 / p - (3.0 - gamma) / 3.0;
  if (!(inv_q > 0.0))
    throw std::invalid_argument("hls_exponent: exponent relation gives q = infinity or worse");
  const double q = 1.0 / inv_q;
  if (!(q > p))
    throw std::invalid_argument("hls_exponent: exponent relation gives q <= p");
  return q;
}

HlsProbe hls_ratio(const RealField& f, double p, double gamma) {
  HlsProbe probe;
  probe.p = p;
  probe.q = hls_exponent(p, gamma);
  probe.gamma = gamma;
  const double denominator = lebesgue_norm(f, p);
  if (denominator == 0.0)
    throw std::invalid_argument("hls_ratio: zero field has no ratio");
  RieszDiagnostics diag;
  const RealField image = riesz_potential(f, gamma, &diag);
  if (diag.flagged)
    throw std::invalid_argument("hls_ratio: field must be mean-zero");
  probe.ratio = lebesgue_norm(image, probe.q) / denominator;
  return probe;
}

ProbeReport hls_sweep(const GridSpec& g, double p, double gamma, int count,
                      std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("hls_sweep: count must be positive");
  ProbeReport report;
  report.probe = "hls";
  report.params = {{"p", p},
                   {"q", hls_exponent(p, gamma)},
                   {"gamma", gamma},
                   {"n", static_cast<double>(g.n())},
                   {"L", g.box_length()},
                   {"count", static_cast<double>(count)}};
  report.seed = seed;
  for (int i = 0; i < count; ++i) {
    const RealField f = random_mean_zero_gaussian(g, seed + static_cast<std::uint64_t>(i));
    report.ratios.push_back(hls_ratio(f, p, gamma).ratio);
  }
  finalize_probe_report(report);
  return report;
}

// --- trilinear bound of the integral equation --------------------------------

TrilinearProbe trilinear_ratio(const DyadicBank& bank, const CauchyPair& v_data,
                               double mu, const std::vector<AdmissibleTriple>& triples,
                               double dt, double T) {
  require_same_grid(bank.grid(), v_data.grid(), "trilinear_ratio");
  const double s0 = bank.grid().gamma() / 6.0;
  const Trajectory v = free_trajectory(v_data, dt, T);
  const Trajectory b = duhamel_trilinear(v, v, v);
  TrilinearProbe probe;
  probe.numerator = resolution_norm(bank, b, mu, triples);
  const double v_mu = resolution_norm(bank, v, mu, triples);
  const double v_s0 = resolution_norm(bank, v, s0, triples);
  probe.denominator = v_mu * v_s0 * v_s0;
  if (probe.denominator == 0.0) {
    probe.undefined = true;
    return probe;
  }
  probe.ratio = probe.numerator / probe.denominator;
  return probe;
}

ProbeReport trilinear_sweep(const DyadicBank& bank, double mu,
                            const std::vector<AdmissibleTriple>& triples, double dt,
                            double T, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("trilinear_sweep: count must be positive");
  const GridSpec& g = bank.grid();
  ProbeReport report;
  report.probe = "trilinear";
  report.params = {{"mu", mu},
                   {"gamma", g.gamma()},
                   {"n", static_cast<double>(g.n())},
                   {"L", g.box_length()},
                   {"dt", dt},
                   {"T", T},
                   {"count", static_cast<double>(count)}};
  report.seed = seed;
  report.notes.push_back(
      "dispersive norms approximated by sup-in-time Sobolev norms plus the supplied "
      "admissible-triple mixed norms");
  const int cut = bank.j_max() - 1;
  for (int i = 0; i < count; ++i) {
    const CauchyPair draw =
        power_law_pair(g, 0.7, 1.0, seed + static_cast<std::uint64_t>(i));
    const CauchyPair high(draw.position - bank.low_pass(draw.position, cut),
                          draw.velocity - bank.low_pass(draw.velocity, cut));
    const TrilinearProbe probe = trilinear_ratio(bank, high, mu, triples, dt, T);
    if (probe.undefined)
      throw std::invalid_argument("trilinear_sweep: degenerate zero draw");
    report.ratios.push_back(probe.ratio);
  }
  finalize_probe_report(report);
  return report;
}

// --- interaction-term bounds ---------------------------------------------------

InteractionRatios local_nonlinear_ratios(const Trajectory& u_traj,
                                         const Trajectory& v_traj, double gamma,
                                         double T) {
  require_gamma(gamma, "local_nonlinear_ratios");
  require_same_grid(u_traj.grid(), v_traj.grid(), "local_nonlinear_ratios");
  if (u_traj.size() != v_traj.size() || std::abs(u_traj.dt() - v_traj.dt()) > 1e-12)
    throw std::invalid_argument("local_nonlinear_ratios: trajectories must share sampling");
  for (std::size_t k = 0; k < u_traj.size(); ++k)
    if (std::abs(u_traj[k].time_stamp - v_traj[k].time_stamp) > 1e-9)
      throw std::invalid_argument("local_nonlinear_ratios: sample times differ");
  if (!(std::isfinite(T) && T > 0.0))
    throw std::invalid_argument("local_nonlinear_ratios: T must be positive");

  const ExponentSet e = derive_exponents(gamma);
  std::size_t used = 0;
  const std::vector<double> weights = trapezoid_weights(u_traj, T, used);

  InteractionRatios result;
  result.names = {"I(u^2)u", "I(uv)u", "I(v^2)u", "I(u^2)v", "I(uv)v"};
  for (std::size_t k = 0; k < used; ++k) {
    const RealField& a = u_traj[k].position;
    const RealField& b = v_traj[k].position;
    const RealField iu2 = riesz_potential(truncated_product(a, a), gamma);
    const RealField iuv = riesz_potential(truncated_product(a, b), gamma);
    const RealField iv2 = riesz_potential(truncated_product(b, b), gamma);
    const std::array<RealField, 5> terms = {
        truncated_product(iu2, a), truncated_product(iuv, a), truncated_product(iv2, a),
        truncated_product(iu2, b), truncated_product(iuv, b)};
    for (std::size_t i = 0; i < terms.size(); ++i)
      result.lhs[i] += weights[k] * lebesgue_norm(terms[i], 2.0);

    result.u_h1_sup = std::max(result.u_h1_sup, sobolev_norm(a, 1.0));
    result.v_alpha_proxy = std::max(result.v_alpha_proxy, sobolev_norm(b, e.alpha));
    result.v_beta_proxy = std::max(result.v_beta_proxy, sobolev_norm(b, e.beta));
  }

  const double u1 = result.u_h1_sup;
  const double va = result.v_alpha_proxy;
  const double vb = result.v_beta_proxy;
  const double t_mixed = std::pow(T, (5.0 - gamma) / 3.0);
  const double t_quadratic = std::pow(T, (4.0 - gamma) / 3.0);
  result.rhs = {T * u1 * u1 * u1, t_mixed * u1 * u1 * va, t_quadratic * u1 * vb * vb,
                t_mixed * u1 * u1 * va, t_quadratic * u1 * vb * vb};
  for (std::size_t i = 0; i < result.rhs.size(); ++i) {
    result.defined[i] = result.rhs[i] > 0.0;
    result.ratio[i] = result.defined[i] ? result.lhs[i] / result.rhs[i] : 0.0;
  }
  return result;
}

// --- frequency-localized commutator ------------------------------------------

CommutatorResidual commutator_residual(const DyadicBank& bank, const RealField& v,
                                       const RealField& u, int j, double gamma) {
  require_gamma(gamma, "commutator_residual");
  require_same_grid(bank.grid(), v.grid(), "commutator_residual");
  require_same_grid(bank.grid(), u.grid(), "commutator_residual");
  if (j < 2 || j > bank.j_max())
    throw std::invalid_argument("commutator_residual: j = " + std::to_string(j) +
                                " outside [2, " + std::to_string(bank.j_max()) + "]");
  const RealField block = bank.block(v, j);
  const RealField smooth = bank.low_pass(u, j - 1);
  const RealField joint = riesz_potential(pointwise_product(block, smooth), gamma);
  const RealField separate = pointwise_product(riesz_potential(block, gamma), smooth);
  CommutatorResidual result{joint - separate, 0.0, 0.0};
  result.l2 = lebesgue_norm(result.residual, 2.0);
  result.proxy = lebesgue_norm(joint, 2.0) + lebesgue_norm(separate, 2.0);
  return result;
}

CommutatorBound commutator_bound_check(const DyadicBank& bank, const RealField& v,
                                       const RealField& u, int j, double r, double gamma) {
  if (!(std::isfinite(r) && r > 2.0))
    throw std::invalid_argument("commutator_bound_check: need 2 < r < infinity");
  const CommutatorResidual residual = commutator_residual(bank, v, u, j, gamma);
  CommutatorBound bound;
  bound.residual_l2 = residual.l2;
  bound.denominator = std::pow(2.0, j * (gamma - 4.0 + 3.0 / r)) *
                      lebesgue_norm(bank.block(v, j), r) * gradient_l2(u);
  if (bound.denominator == 0.0) {
    bound.undefined = true;
    return bound;
  }
  bound.ratio = bound.residual_l2 / bound.denominator;
  return bound;
}

ProbeReport commutator_sweep(const DyadicBank& bank, const RealField& v,
                             const RealField& u, const std::vector<int>& j_list,
                             double r, double gamma) {
  if (j_list.empty()) throw std::invalid_argument("commutator_sweep: empty j list");
  ProbeReport report;
  report.probe = "commutator";
  report.params = {{"r", r},
                   {"gamma", gamma},
                   {"n", static_cast<double>(bank.grid().n())},
                   {"L", bank.grid().box_length()},
                   {"j_lo", static_cast<double>(*std::min_element(j_list.begin(), j_list.end()))},
                   {"j_hi", static_cast<double>(*std::max_element(j_list.begin(), j_list.end()))}};
  for (int j : j_list) {
    const CommutatorBound bound = commutator_bound_check(bank, v, u, j, r, gamma);
    if (bound.undefined)
      throw std::invalid_argument("commutator_sweep: degenerate block at j = " +
                                  std::to_string(j));
    report.ratios.push_back(bound.ratio);
  }
  finalize_probe_report(report);
  return report;
}

// --- bilinear symbol band ------------------------------------------------------

double coifman_meyer_symbol(const Vec3& xi1, const Vec3& xi2, double lambda, int j,
                            double gamma) {
  require_gamma(gamma, "coifman_meyer_symbol");
  if (j < 2) throw std::invalid_argument("coifman_meyer_symbol: need j >= 2");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("coifman_meyer_symbol: lambda must lie in [0, 1]");
  const double n1 = xi1.norm();
  const double n2 = xi2.norm();
  if (n1 < std::pow(2.0, j - 1) - 1e-12)
    throw std::invalid_argument("coifman_meyer_symbol: |xi1| below the support regime");
  if (n2 > std::pow(2.0, j - 2) + 1e-12)
    throw std::invalid_argument("coifman_meyer_symbol: |xi2| above the support regime");
  // |m| = (|xi1 + lambda xi2| / |xi1|)^{gamma-4}; the quotient form returns
  // exactly 1 when lambda |xi2| = 0.
  return std::pow((xi1 + lambda * xi2).norm() / n1, gamma - 4.0);
}

SymbolCertificate coifman_meyer_certificate(int j, double gamma, int samples_per_axis) {
  require_gamma(gamma, "coifman_meyer_certificate");
  if (j < 2) throw std::invalid_argument("coifman_meyer_certificate: need j >= 2");
  if (samples_per_axis < 2)
    throw std::invalid_argument("coifman_meyer_certificate: need at least two samples per axis");

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  const std::vector<Vec3> directions = {
      {1, 0, 0},
      {0, 1, 0},
      {0, 0, 1},
      {inv_sqrt2, inv_sqrt2, 0},
      {inv_sqrt2, 0, inv_sqrt2},
      {0, inv_sqrt2, inv_sqrt2},
      {inv_sqrt2, -inv_sqrt2, 0},
      {inv_sqrt3, inv_sqrt3, inv_sqrt3},
      {inv_sqrt3, -inv_sqrt3, inv_sqrt3},
      {-inv_sqrt3, inv_sqrt3, inv_sqrt3}};

  SymbolCertificate certificate;
  certificate.lower = std::pow(2.0, gamma - 4.0);
  certificate.upper = std::pow(2.0, 4.0 - gamma);
  certificate.min_magnitude = std::numeric_limits<double>::infinity();

  const double base1 = std::pow(2.0, j - 1);
  const double cap2 = std::pow(2.0, j - 2);
  for (int a = 0; a < samples_per_axis; ++a) {
    // |xi1| on a geometric grid spanning two octaves above the floor.
    const double m1 = base1 * std::pow(4.0, a / double(samples_per_axis - 1));
    for (int b = 0; b < samples_per_axis; ++b) {
      const double m2 = cap2 * b / double(samples_per_axis - 1);
      for (int l = 0; l < samples_per_axis; ++l) {
        const double lambda = l / double(samples_per_axis - 1);
        for (const Vec3& d1 : directions)
          for (const Vec3& d2 : directions) {
            const double magnitude =
                coifman_meyer_symbol(m1 * d1, m2 * d2, lambda, j, gamma);
            certificate.max_magnitude = std::max(certificate.max_magnitude, magnitude);
            certificate.min_magnitude = std::min(certificate.min_magnitude, magnitude);
            ++certificate.samples;
          }
      }
    }
  }
  certificate.within = certificate.min_magnitude >= certificate.lower - 1e-12 &&
                       certificate.max_magnitude <= certificate.upper + 1e-12;
  return certificate;
}

// --- space-time pairing bounds -------------------------------------------------

PairingBoundReport lemma6_bound_check(const Trajectory& u_traj, const CauchyPair& v_data,
                                      int J, double s, double gamma, double r1, double r2,
                                      double T, double es) {
  require_gamma(gamma, "lemma6_bound_check");
  require_same_grid(u_traj.grid(), v_data.grid(), "lemma6_bound_check");
  const double r1_low = std::max(2.0, 1.0 / (3.0 - gamma));
  if (!(std::isfinite(r1) && r1 > r1_low && r1 < 2.0 / (3.0 - gamma)))
    throw std::invalid_argument("lemma6_bound_check: r1 outside its admissible range");
  if (!(std::isfinite(r2) && r2 >= 4.0 / (gamma - 2.0)))
    throw std::invalid_argument("lemma6_bound_check: r2 outside its admissible range");
  if (J < 0) throw std::invalid_argument("lemma6_bound_check: J must be nonnegative");
  if (!(std::isfinite(es) && es > 0.0))
    throw std::invalid_argument("lemma6_bound_check: es must be positive");
  if (!(std::isfinite(T) && T > 0.0))
    throw std::invalid_argument("lemma6_bound_check: T must be positive");
  if (std::abs(v_data.time_stamp - u_traj.start_time()) > 1e-9)
    throw std::invalid_argument("lemma6_bound_check: v data must start with the trajectory");

  std::size_t used = 0;
  const std::vector<double> weights = trapezoid_weights(u_traj, T, used);

  PairingBoundReport report;
  double accumulated33 = 0.0;
  double accumulated34 = 0.0;
  for (std::size_t k = 0; k < used; ++k) {
    const CauchyPair& sample = u_traj[k];
    const RealField v_free =
        free_flow(v_data, sample.time_stamp - v_data.time_stamp).position;
    const RealField& a = sample.position;
    const RealField iu2 = riesz_potential(truncated_product(a, a), gamma);
    const RealField iuv = riesz_potential(truncated_product(a, v_free), gamma);
    accumulated33 +=
        weights[k] * inner_product(pointwise_product(iu2, v_free), sample.velocity);
    accumulated34 +=
        weights[k] * inner_product(pointwise_product(iuv, a), sample.velocity);
    report.E_T = std::max(report.E_T, energy(sample));
  }
  report.i33 = std::abs(accumulated33);
  report.i34 = std::abs(accumulated34);

  const double term_r1 =
      std::pow(T, 0.5 + 1.0 / r1) *
      std::pow(2.0, -2.0 * J * (s - (gamma / 2.0 - 0.75 + 1.0 / (2.0 * r1))));
  const double term_r2 =
      std::pow(T, 0.5 + 1.0 / r2) *
      std::pow(2.0, -2.0 * J * (s - (gamma / 2.0 - 0.75 + 1.0 / (2.0 * r2))));
  const double term_half = T * std::pow(2.0, -2.0 * J * (s - 0.5));
  report.rhs33 = (term_r1 + term_r2 + term_half) * report.E_T * es * es;
  report.rhs34 = term_r2 * report.E_T * es * es;

  report.hypothesis_ratio =
      report.E_T / (std::pow(2.0, 2.0 * J * (1.0 - s)) * (es * es + es * es * es * es));
  report.hypothesis_warning = report.hypothesis_ratio > 10.0;

  if (report.rhs33 == 0.0 || report.rhs34 == 0.0) {
    report.undefined = true;
    return report;
  }
  report.ratio33 = report.i33 / report.rhs33;
  report.ratio34 = report.i34 / report.rhs34;
  return report;
}

}  // namespace kgh

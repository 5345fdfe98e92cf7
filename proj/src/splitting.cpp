#include "kgh/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

#include "kgh/spectral_ops.hpp"

namespace kgh {

namespace {

double pair_norm(const CauchyPair& pair, double s) {
  const auto [position, velocity] = sobolev_norm(pair, s);
  return position + velocity;
}

std::string format_double(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

void require_gamma(double gamma, const char* where) {
  if (!(gamma > 2.0 && gamma < 3.0))
    throw std::invalid_argument(std::string(where) + ": gamma must lie in (2, 3), got " +
                                format_double(gamma));
}

void require_exponent_pair(double r1, double r2, double gamma, const char* where) {
  const double r1_low = std::max(2.0, 1.0 / (3.0 - gamma));
  const double r1_high = 2.0 / (3.0 - gamma);
  if (!(std::isfinite(r1) && r1 > r1_low && r1 < r1_high))
    throw std::invalid_argument(std::string(where) + ": r1 must lie in (" +
                                format_double(r1_low) + ", " + format_double(r1_high) +
                                "), got " + format_double(r1));
  const double r2_low = 4.0 / (gamma - 2.0);
  if (!(std::isfinite(r2) && r2 >= r2_low))
    throw std::invalid_argument(std::string(where) + ": r2 must lie in [" +
                                format_double(r2_low) + ", infinity), got " +
                                format_double(r2));
}

// Tolerant lookup in a sigma-indexed norm map; the keys are closed-form
// doubles but may arrive through different arithmetic paths.
double find_norm(const std::map<double, double>& norms, double sigma, const char* which) {
  for (const auto& [key, value] : norms)
    if (std::abs(key - sigma) <= 1e-9) return value;
  throw std::invalid_argument(std::string("verify_split_bounds: ledger lacks ") + which +
                              " entry at sigma = " + format_double(sigma));
}

double spread(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi / *lo;
}

}  // namespace

ExponentSet derive_exponents(double gamma) {
  require_gamma(gamma, "derive_exponents");
  ExponentSet e;
  e.gamma = gamma;
  e.s0 = gamma / 6.0;
  e.theta = 6.0 / gamma - 2.0;
  e.alpha = (2.0 * gamma - 4.0) / 3.0;
  e.beta = (gamma - 1.0) / 3.0;
  e.s_threshold = gamma / 4.0;
  e.scaling_alternative = gamma / 2.0 - 1.0;
  e.conformal_alternative = gamma / 4.0 - 0.25;
  return e;
}

SplitPair split_data(const DyadicBank& bank, const CauchyPair& data, int J) {
  require_same_grid(bank.grid(), data.grid(), "split_data");
  if (J < 0 || J > bank.j_max())
    throw std::invalid_argument("split_data: J = " + std::to_string(J) +
                                " outside [0, " + std::to_string(bank.j_max()) + "]");
  SplitPair split{
      CauchyPair{bank.low_pass(data.position, J), bank.low_pass(data.velocity, J),
                 data.time_stamp},
      CauchyPair::zero(data.grid())};
  split.high = CauchyPair{data.position - split.low.position,
                          data.velocity - split.low.velocity, data.time_stamp};
  return split;
}

std::vector<double> default_sigma_list(const ExponentSet& exponents, double s) {
  std::vector<double> sigmas{exponents.s0, exponents.alpha, exponents.beta, s, 1.0};
  std::sort(sigmas.begin(), sigmas.end());
  sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());
  return sigmas;
}

NormLedger norm_ledger(const CauchyPair& data, const CauchyPair& low,
                       const CauchyPair& high, int J, double s,
                       const std::vector<double>& sigma_list) {
  require_same_grid(data.grid(), low.grid(), "norm_ledger");
  require_same_grid(data.grid(), high.grid(), "norm_ledger");
  if (!std::isfinite(s)) throw std::invalid_argument("norm_ledger: s must be finite");
  if (sigma_list.empty()) throw std::invalid_argument("norm_ledger: empty sigma list");
  NormLedger ledger;
  ledger.J = J;
  ledger.s = s;
  ledger.E_s = pair_norm(data, s);
  for (double sigma : sigma_list) {
    if (!std::isfinite(sigma))
      throw std::invalid_argument("norm_ledger: sigma must be finite");
    ledger.E_h[sigma] = pair_norm(high, sigma);
    ledger.E_l[sigma] = pair_norm(low, sigma);
  }
  return ledger;
}

SplitBoundReport verify_split_bounds(const std::vector<NormLedger>& ledgers,
                                     double s, double sigma) {
  if (ledgers.empty())
    throw std::invalid_argument("verify_split_bounds: no ledgers");
  if (sigma > s + 1e-12)
    throw std::invalid_argument("verify_split_bounds: high bound needs sigma <= s, got sigma = " +
                                format_double(sigma) + ", s = " + format_double(s));
  if (s > 1.0 + 1e-12)
    throw std::invalid_argument("verify_split_bounds: low bound needs s <= 1, got s = " +
                                format_double(s));
  SplitBoundReport report;
  report.s = s;
  report.sigma = sigma;
  for (const NormLedger& ledger : ledgers) {
    if (std::abs(ledger.s - s) > 1e-12)
      throw std::invalid_argument("verify_split_bounds: ledger at J = " +
                                  std::to_string(ledger.J) + " has s = " +
                                  format_double(ledger.s) + ", expected " + format_double(s));
    report.J_list.push_back(ledger.J);
    if (ledger.E_s == 0.0) {
      report.undefined = true;
      continue;
    }
    const double high_scale = std::pow(2.0, ledger.J * (sigma - s)) * ledger.E_s;
    const double low_scale = std::pow(2.0, ledger.J * (1.0 - s)) * ledger.E_s;
    report.rho_h.push_back(find_norm(ledger.E_h, sigma, "high") / high_scale);
    report.rho_l.push_back(find_norm(ledger.E_l, 1.0, "low") / low_scale);
  }
  if (report.undefined) {
    report.rho_h.clear();
    report.rho_l.clear();
    return report;
  }
  report.rho_h_spread = spread(report.rho_h);
  report.rho_l_spread = spread(report.rho_l);
  return report;
}

EnergyGrowthRecord energy_bound_report(const Trajectory& low_trajectory, int J,
                                       double s, double T, double es) {
  if (low_trajectory.size() == 0)
    throw std::invalid_argument("energy_bound_report: empty trajectory");
  if (!(std::isfinite(es) && es >= 0.0))
    throw std::invalid_argument("energy_bound_report: es must be finite and nonnegative");
  if (!(std::isfinite(T) && T >= 0.0))
    throw std::invalid_argument("energy_bound_report: T must be finite and nonnegative");
  EnergyGrowthRecord record;
  record.J = J;
  record.s = s;
  record.T = T;
  bool any = false;
  for (std::size_t k = 0; k < low_trajectory.size(); ++k) {
    const CauchyPair& sample = low_trajectory[k];
    if (sample.time_stamp > T + 1e-9) continue;
    record.E_T = std::max(record.E_T, energy(sample));
    any = true;
  }
  if (!any)
    throw std::invalid_argument("energy_bound_report: no trajectory sample at or before T");
  record.budget = std::pow(2.0, 2.0 * J * (1.0 - s)) * (es * es + es * es * es * es);
  record.ratio = record.E_T / record.budget;
  return record;
}

EnergyGrowthSweep energy_growth_sweep(const std::vector<EnergyGrowthRecord>& records) {
  if (records.size() < 2)
    throw std::invalid_argument("energy_growth_sweep: need at least two records");
  EnergyGrowthSweep sweep;
  sweep.records = records;
  sweep.predicted = 2.0 * (1.0 - records.front().s);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const EnergyGrowthRecord& record : records) {
    if (std::abs(record.s - records.front().s) > 1e-12)
      throw std::invalid_argument("energy_growth_sweep: records mix different s");
    if (!(record.E_T > 0.0))
      throw std::invalid_argument("energy_growth_sweep: E_T must be positive at J = " +
                                  std::to_string(record.J));
    const double x = record.J;
    const double y = std::log2(record.E_T);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(records.size());
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0)
    throw std::invalid_argument("energy_growth_sweep: records need at least two distinct J");
  sweep.slope = (n * sxy - sx * sy) / denom;
  return sweep;
}

void validate_constants(const BootstrapConstants& constants, double gamma) {
  require_gamma(gamma, "validate_constants");
  const std::pair<const char*, double> positives[] = {
      {"C", constants.C},   {"C1", constants.C1}, {"C2", constants.C2},
      {"C3", constants.C3}, {"C4", constants.C4}, {"C5", constants.C5}};
  for (const auto& [name, value] : positives)
    if (!(std::isfinite(value) && value > 0.0))
      throw std::invalid_argument(std::string("validate_constants: ") + name +
                                  " must be positive and finite, got " + format_double(value));
  require_exponent_pair(constants.r1, constants.r2, gamma, "validate_constants");
}

GateReport exponent_gate(double s, double gamma, double r1, double r2) {
  require_gamma(gamma, "exponent_gate");
  require_exponent_pair(r1, r2, gamma, "exponent_gate");
  if (!std::isfinite(s)) throw std::invalid_argument("exponent_gate: s must be finite");
  const ExponentSet e = derive_exponents(gamma);
  GateReport report;
  report.terms = {e.beta,
                  e.alpha / 4.0 + e.s0 / 2.0 + 0.25,
                  0.5,
                  gamma / 2.0 - 0.75 + 1.0 / (2.0 * r1),
                  gamma / 2.0 - 0.75 + 1.0 / (2.0 * r2)};
  report.names = {"beta", "alpha/4 + s0/2 + 1/4", "1/2", "gamma/2 - 3/4 + 1/(2 r1)",
                  "gamma/2 - 3/4 + 1/(2 r2)"};
  std::size_t argmax = 0;
  for (std::size_t i = 1; i < report.terms.size(); ++i)
    if (report.terms[i] > report.terms[argmax]) argmax = i;
  report.max_term = report.terms[argmax];
  report.argmax = report.names[argmax];
  report.margin = s - report.max_term;
  report.passes = report.margin > 0.0;
  return report;
}

BootstrapTime bootstrap_time(int J, double s, double gamma,
                             const BootstrapConstants& constants, double es) {
  validate_constants(constants, gamma);
  if (J < 0) throw std::invalid_argument("bootstrap_time: J must be nonnegative");
  if (!(std::isfinite(es) && es > 0.0))
    throw std::invalid_argument("bootstrap_time: es must be positive and finite");
  const GateReport gate = exponent_gate(s, gamma, constants.r1, constants.r2);
  if (!gate.passes)
    throw std::invalid_argument("bootstrap_time: exponent gate fails at s = " +
                                format_double(s) + "; binding term " + gate.argmax + " = " +
                                format_double(gate.max_term));
  const ExponentSet e = derive_exponents(gamma);
  const double e2 = es * es;
  const double e4 = e2 * e2;
  const double r1 = constants.r1;
  const double r2 = constants.r2;
  BootstrapTime result;
  result.terms = {
      std::pow(std::pow(2.0, 2.0 * J * (s - e.beta)) / (5.0 * constants.C1 * e2),
               3.0 / (4.0 - gamma)),
      std::pow(std::pow(2.0, 4.0 * J * (s - e.alpha / 4.0 - e.s0 / 2.0 - 0.25)) /
                   (5.0 * constants.C2 * e4),
               3.0 / (5.0 - gamma)),
      std::pow(std::pow(2.0, 2.0 * J * (s - (gamma / 2.0 - 0.75 + 1.0 / (2.0 * r1)))) /
                   (5.0 * constants.C3 * e2),
               2.0 * r1 / (r1 + 2.0)),
      std::pow(2.0, 2.0 * J * (s - 0.5)) / (5.0 * constants.C4 * e2),
      std::pow(std::pow(2.0, 2.0 * J * (s - (gamma / 2.0 - 0.75 + 1.0 / (2.0 * r2)))) /
                   (5.0 * constants.C5 * e2),
               2.0 * r2 / (r2 + 2.0))};
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < result.terms.size(); ++i)
    if (result.terms[i] < result.terms[argmin]) argmin = i;
  result.argmin = static_cast<int>(argmin);
  result.value = result.terms[argmin];
  return result;
}

RecombinationReport recombine_and_compare(const DyadicBank& bank,
                                          const CauchyPair& data, int J,
                                          double s, const SolverConfig& config) {
  validate_config(config);
  const SplitPair split = split_data(bank, data, J);

  RecombinationReport report;
  report.J = J;
  report.s = s;

  for (int level = 0; level < 3; ++level) {
    SolverConfig cfg = config;
    cfg.dt = config.dt / static_cast<double>(1 << level);
    if (level == 0) {
      // Coarsest run: keep the direct solve's samples and stream the
      // split evolution past them to record the full discrepancy curves.
      const Trajectory full = evolve(data, cfg, RhsMode::full);
      const PairObserver observer = [&](std::int64_t k, const CauchyPair& u,
                                        const CauchyPair& v) {
        const CauchyPair& reference = full[static_cast<std::size_t>(k)];
        const RealField diff = u.position + v.position - reference.position;
        report.times.push_back(reference.time_stamp);
        report.h1_discrepancy.push_back(sobolev_norm(diff, 1.0));
        report.l2_discrepancy.push_back(lebesgue_norm(diff, 2.0));
      };
      evolve_perturbed_coupled(split.low, split.high, cfg, observer);
      report.terminal_h1[0] = report.h1_discrepancy.back();
    } else {
      const CauchyPair full = evolve_scan(data, cfg, RhsMode::full, nullptr, nullptr);
      const auto [u, v] = evolve_perturbed_coupled(split.low, split.high, cfg);
      report.terminal_h1[static_cast<std::size_t>(level)] =
          sobolev_norm(u.position + v.position - full.position, 1.0);
    }
  }

  report.fitted_order = 0.5 * (std::log2(report.terminal_h1[0] / report.terminal_h1[1]) +
                               std::log2(report.terminal_h1[1] / report.terminal_h1[2]));
  return report;
}

}  // namespace kgh

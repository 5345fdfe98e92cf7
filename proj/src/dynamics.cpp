#include "kgh/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <utility>

#include "kgh/snapshot.hpp"
#include "kgh/spectral_ops.hpp"

namespace kgh {

namespace {

RealField truncated_product(const RealField& a, const RealField& b, bool dealias) {
  RealField p = pointwise_product(a, b);
  return dealias ? dealias_truncate(p) : p;
}

RealField cubic_force(const RealField& phi, double gamma, bool dealias) {
  RealField pot = riesz_potential(truncated_product(phi, phi, dealias), gamma);
  return truncated_product(pot, phi, dealias);
}

RealField perturbed_force(const RealField& u, const RealField& v, double gamma, bool dealias) {
  require_same_grid(u.grid(), v.grid(), "perturbed_nonlinearity");
  const RealField iu2 = riesz_potential(truncated_product(u, u, dealias), gamma);
  const RealField iuv = riesz_potential(truncated_product(u, v, dealias), gamma);
  const RealField iv2 = riesz_potential(truncated_product(v, v, dealias), gamma);
  // Five terms grouped by the outer factor:
  //   (I u^2 + 2 I uv + I v^2) u  +  (I u^2 + 2 I uv) v.
  const RealField mixed = iu2 + 2.0 * iuv;
  return truncated_product(mixed + iv2, u, dealias) + truncated_product(mixed, v, dealias);
}

void check_finite(const CauchyPair& state, std::int64_t step) {
  for (double x : state.position.values())
    if (!std::isfinite(x)) throw SolverAbort(step);
  for (double x : state.velocity.values())
    if (!std::isfinite(x)) throw SolverAbort(step);
}

CauchyPair project_data(const CauchyPair& data, bool dealias) {
  if (!dealias) return data;
  return CauchyPair(dealias_truncate(data.position), dealias_truncate(data.velocity),
                    data.time_stamp);
}

std::int64_t config_steps(const SolverConfig& cfg) {
  return std::llround(cfg.T / cfg.dt);
}

const char* scheme_name(RhsMode mode) {
  switch (mode) {
    case RhsMode::full: return "strang-full";
    case RhsMode::high: return "strang-high";
    case RhsMode::perturbed: return "strang-perturbed";
  }
  return "strang";
}

// H^s norm that reports +inf instead of NaN, so norm comparisons never
// swallow a poisoned iterate.
double finite_or_inf_norm(const RealField& f, double s) {
  const double v = sobolev_norm(f, s);
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

}  // namespace

RealField hartree_nonlinearity(const RealField& phi) {
  return cubic_force(phi, phi.grid().gamma(), true);
}

RealField perturbed_nonlinearity(const RealField& u, const RealField& v) {
  return perturbed_force(u, v, u.grid().gamma(), true);
}

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw std::invalid_argument("SolverConfig: dt must be positive and finite");
  if (!std::isfinite(cfg.T) || !(cfg.T >= cfg.dt))
    throw std::invalid_argument("SolverConfig: horizon T must be at least dt");
  const std::int64_t m = std::llround(cfg.T / cfg.dt);
  if (m < 1 || std::abs(static_cast<double>(m) * cfg.dt - cfg.T) > 1e-9 * std::max(1.0, cfg.T))
    throw std::invalid_argument("SolverConfig: T must be an integral number of steps");
  if (cfg.scheme != "strang")
    throw std::invalid_argument("SolverConfig: unknown scheme '" + cfg.scheme + "'");
}

CauchyPair evolve_scan(const CauchyPair& data, const SolverConfig& cfg, RhsMode mode,
                       const Trajectory* v, const StepObserver& observer) {
  validate_config(cfg);
  const double gamma = data.grid().gamma();
  if (mode == RhsMode::perturbed) {
    if (v == nullptr)
      throw std::invalid_argument("evolve: perturbed mode needs a background trajectory");
    require_same_grid(data.grid(), v->grid(), "evolve");
    const double slack = 1e-9 * std::max(1.0, cfg.T);
    if (v->start_time() > data.time_stamp + slack ||
        v->end_time() < data.time_stamp + cfg.T - slack)
      throw std::invalid_argument("evolve: background trajectory does not cover the horizon");
  } else if (v != nullptr) {
    throw std::invalid_argument("evolve: background trajectory only applies to perturbed mode");
  }

  CauchyPair state = project_data(data, cfg.dealias);
  if (observer) observer(0, state);
  const double half = 0.5 * cfg.dt;
  const std::int64_t steps = config_steps(cfg);

  if (mode == RhsMode::perturbed) {
    // Background frozen per step at the midpoint sample (see header).
    for (std::int64_t k = 0; k < steps; ++k) {
      const RealField v_mid = v->at_time(state.time_stamp + half).position;
      state.velocity =
          state.velocity - half * perturbed_force(state.position, v_mid, gamma, cfg.dealias);
      state = free_flow(state, cfg.dt);
      state.velocity =
          state.velocity - half * perturbed_force(state.position, v_mid, gamma, cfg.dealias);
      check_finite(state, k + 1);
      if (observer) observer(k + 1, state);
    }
    return state;
  }

  // Kick-drift-kick; the closing kick of one step and the opening kick of
  // the next share a force evaluation (the kick moves only the velocity).
  RealField f = cubic_force(state.position, gamma, cfg.dealias);
  for (std::int64_t k = 0; k < steps; ++k) {
    state.velocity = state.velocity - half * f;
    state = free_flow(state, cfg.dt);
    f = cubic_force(state.position, gamma, cfg.dealias);
    state.velocity = state.velocity - half * f;
    check_finite(state, k + 1);
    if (observer) observer(k + 1, state);
  }
  return state;
}

Trajectory evolve(const CauchyPair& data, const SolverConfig& cfg, RhsMode mode,
                  const Trajectory* v) {
  std::vector<CauchyPair> samples;
  samples.reserve(static_cast<std::size_t>(config_steps(cfg)) + 1);
  evolve_scan(data, cfg, mode, v,
              [&samples](std::int64_t, const CauchyPair& s) { samples.push_back(s); });
  return Trajectory(std::move(samples), scheme_name(mode));
}

std::pair<CauchyPair, CauchyPair> evolve_perturbed_coupled(const CauchyPair& u0,
                                                           const CauchyPair& v0,
                                                           const SolverConfig& cfg,
                                                           const PairObserver& observer) {
  validate_config(cfg);
  require_same_grid(u0.grid(), v0.grid(), "evolve_perturbed_coupled");
  if (std::abs(u0.time_stamp - v0.time_stamp) > 1e-9)
    throw std::invalid_argument("evolve_perturbed_coupled: data time stamps differ");
  const double gamma = u0.grid().gamma();
  const double half = 0.5 * cfg.dt;
  const std::int64_t steps = config_steps(cfg);

  CauchyPair u = project_data(u0, cfg.dealias);
  CauchyPair w = project_data(v0, cfg.dealias);
  if (observer) observer(0, u, w);
  RealField fw = cubic_force(w.position, gamma, cfg.dealias);
  for (std::int64_t k = 0; k < steps; ++k) {
    // Advance the high field first; its bracketing positions give the
    // midpoint background for the low step.  The blend below matches
    // Trajectory::at_time bit for bit (frac = 0.5 on dyadic step grids).
    const RealField w_prev = w.position;
    w.velocity = w.velocity - half * fw;
    w = free_flow(w, cfg.dt);
    fw = cubic_force(w.position, gamma, cfg.dealias);
    w.velocity = w.velocity - half * fw;
    const RealField v_mid = 0.5 * w_prev + 0.5 * w.position;

    u.velocity = u.velocity - half * perturbed_force(u.position, v_mid, gamma, cfg.dealias);
    u = free_flow(u, cfg.dt);
    u.velocity = u.velocity - half * perturbed_force(u.position, v_mid, gamma, cfg.dealias);
    check_finite(u, k + 1);
    check_finite(w, k + 1);
    if (observer) observer(k + 1, u, w);
  }
  return {std::move(u), std::move(w)};
}

double energy(const CauchyPair& pair) {
  const auto norms = sobolev_norm(pair, 1.0);
  return 0.5 * norms.first * norms.first + 0.5 * norms.second * norms.second;
}

EnergyReport hamiltonian(const CauchyPair& pair) {
  EnergyReport rep;
  rep.time_stamp = pair.time_stamp;
  rep.E = energy(pair);
  const RealField sq = dealias_truncate(pointwise_product(pair.position, pair.position));
  rep.quartic = 0.25 * inner_product(riesz_potential(sq, pair.grid().gamma()), sq);
  rep.H = rep.E + rep.quartic;
  return rep;
}

Trajectory duhamel_trilinear(const Trajectory& a, const Trajectory& b, const Trajectory& c) {
  require_same_grid(a.grid(), b.grid(), "duhamel_trilinear");
  require_same_grid(a.grid(), c.grid(), "duhamel_trilinear");
  if (a.size() != b.size() || a.size() != c.size())
    throw std::invalid_argument("duhamel_trilinear: sample counts differ");
  if (std::abs(a.dt() - b.dt()) > 1e-12 || std::abs(a.dt() - c.dt()) > 1e-12)
    throw std::invalid_argument("duhamel_trilinear: sample spacings differ");
  const double gamma = a.grid().gamma();
  std::vector<RealField> forcing;
  forcing.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    RealField pot = riesz_potential(truncated_product(a[k].position, b[k].position, true), gamma);
    forcing.push_back(-1.0 * truncated_product(pot, c[k].position, true));
  }
  Trajectory raw = duhamel_series(forcing, a.dt());
  std::vector<CauchyPair> samples;
  samples.reserve(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    CauchyPair s = raw[k];
    s.time_stamp = a[k].time_stamp;
    samples.push_back(std::move(s));
  }
  return Trajectory(std::move(samples), "duhamel-trilinear");
}

PicardResult picard_solve(const CauchyPair& data, const SolverConfig& cfg, double eps,
                          int max_iter) {
  validate_config(cfg);
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("picard_solve: eps must be positive and finite");
  if (max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be at least 1");

  const double s0 = data.grid().gamma() / 6.0;
  auto monitored = [s0](const Trajectory& tr) {
    double m = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k)
      m = std::max(m, finite_or_inf_norm(tr[k].position, s0));
    return m;
  };
  auto distance = [s0](const Trajectory& x, const Trajectory& y) {
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      m = std::max(m, finite_or_inf_norm(x[k].position - y[k].position, s0));
    return m;
  };

  const Trajectory y = free_trajectory(project_data(data, cfg.dealias), cfg.dt, cfg.T);
  PicardLog log;
  log.y_norm = monitored(y);
  log.small_data_ok = log.y_norm <= eps;

  Trajectory w = y;
  int bad_streak = 0;
  for (int it = 1; it <= max_iter; ++it) {
    const Trajectory correction = duhamel_trilinear(w, w, w);
    std::vector<CauchyPair> samples;
    samples.reserve(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) samples.push_back(y[k] + correction[k]);
    Trajectory next(std::move(samples), "picard");

    const double d = distance(next, w);
    log.distances.push_back(d);
    if (log.distances.size() >= 2) {
      const double prev = log.distances[log.distances.size() - 2];
      log.contraction.push_back(prev > 0.0 ? d / prev : 0.0);
      bad_streak = log.contraction.back() < 1.0 ? 0 : bad_streak + 1;
    }
    w = std::move(next);
    log.iterations = it;
    if (d < 1e-10) {
      log.converged = true;
      break;
    }
    if (bad_streak >= 3) {
      log.diverged = true;
      break;
    }
  }
  log.final_norm = monitored(w);
  return {std::move(w), std::move(log)};
}

std::string export_trajectory(const Trajectory& traj, const std::string& directory,
                              const std::string& prefix) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const std::string index_path = (fs::path(directory) / (prefix + "_index.csv")).string();
  std::ofstream out(index_path);
  if (!out) throw std::runtime_error("export_trajectory: cannot open " + index_path);
  out << "step,t,E,H,quartic\n";
  char line[256];
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const CauchyPair& s = traj[k];
    std::snprintf(line, sizeof line, "%s_%06zu", prefix.c_str(), k);
    const fs::path stem = fs::path(directory) / line;
    write_snapshot(stem.string() + "_pos.snap", s.position, s.time_stamp,
                   SnapshotKind::position);
    write_snapshot(stem.string() + "_vel.snap", s.velocity, s.time_stamp,
                   SnapshotKind::velocity);
    const EnergyReport rep = hamiltonian(s);
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g\n", k, s.time_stamp, rep.E,
                  rep.H, rep.quartic);
    out << line;
  }
  if (!out.flush()) throw std::runtime_error("export_trajectory: write failed for " + index_path);
  return index_path;
}

}  // namespace kgh

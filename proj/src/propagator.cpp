#include "kgh/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "kgh/parallel.hpp"
#include "kgh/random_fields.hpp"
#include "kgh/spectral_ops.hpp"
#include "kgh/transform.hpp"

namespace kgh {

namespace {

double inv_or_zero(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

// Rotate a spectral Cauchy pair by the free flow over time t, in place.
void rotate_pair(const GridSpec& g, std::vector<Complex>& pos, std::vector<Complex>& vel,
                 double t) {
  for_each_mode(g, [&](std::int64_t idx, const Vec3& xi, int) {
    const double om = std::sqrt(1.0 + xi.norm2());
    const double c = std::cos(t * om);
    const double s = std::sin(t * om);
    const Complex a = pos[static_cast<std::size_t>(idx)];
    const Complex b = vel[static_cast<std::size_t>(idx)];
    pos[static_cast<std::size_t>(idx)] = c * a + (s / om) * b;
    vel[static_cast<std::size_t>(idx)] = -om * s * a + c * b;
  });
}

SpectrumPtr make_spectrum(const GridSpec& g, std::vector<Complex> coeff) {
  return std::make_shared<SpectrumData>(SpectrumData{g, std::move(coeff)});
}

// Step count for a horizon that must be an integer multiple of dt.
std::int64_t step_count(double dt, double T, const char* who) {
  if (!(dt > 0.0)) throw std::invalid_argument(std::string(who) + ": dt must be positive");
  if (!(T >= dt)) throw std::invalid_argument(std::string(who) + ": horizon shorter than one step");
  const auto m = static_cast<std::int64_t>(std::llround(T / dt));
  if (std::abs(m * dt - T) > 1e-9 * std::max(1.0, std::abs(T)))
    throw std::invalid_argument(std::string(who) + ": T/dt is not an integer");
  return m;
}

}  // namespace

bool validate_admissible(double q, double r, double theta) {
  if (std::isnan(q) || std::isnan(r) || std::isnan(theta)) return false;
  if (!(q >= 2.0) || !(r >= 2.0)) return false;
  if (!(theta >= 0.0) || !(theta <= 1.0)) return false;
  if (q == 2.0 && std::isinf(r) && theta == 0.0) return false;
  const double w = 2.0 + theta;
  if (std::isinf(q)) return true;           // 0 + w/(2r) <= w/4 iff r >= 2
  if (std::isinf(r)) return q * w >= 4.0;   // 1/q <= w/4
  return 4.0 * r + 2.0 * q * w <= q * r * w;
}

Trajectory::Trajectory(std::vector<CauchyPair> samples, std::string scheme)
    : samples_(std::move(samples)), dt_(0.0), scheme_(std::move(scheme)) {
  if (samples_.size() < 2)
    throw std::invalid_argument("Trajectory: need at least two samples");
  const GridSpec& g = samples_.front().grid();
  dt_ = samples_[1].time_stamp - samples_[0].time_stamp;
  if (!(dt_ > 0.0)) throw std::invalid_argument("Trajectory: time stamps must increase");
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    require_same_grid(samples_[k].grid(), g, "Trajectory");
    if (k > 0) {
      const double step = samples_[k].time_stamp - samples_[k - 1].time_stamp;
      if (std::abs(step - dt_) > 1e-12 * std::max(1.0, std::abs(dt_)) + 1e-12)
        throw std::invalid_argument("Trajectory: sampling is not uniform");
    }
  }
}

CauchyPair Trajectory::at_time(double t) const {
  const double slack = 1e-9 * std::max(1.0, dt_);
  if (t < start_time() - slack || t > end_time() + slack)
    throw std::invalid_argument("Trajectory::at_time: t outside the covered window");
  const double u = (t - start_time()) / dt_;
  const auto k = static_cast<std::size_t>(
      std::clamp<double>(std::floor(u), 0.0, static_cast<double>(samples_.size() - 2)));
  const double frac = u - static_cast<double>(k);
  if (std::abs(frac) < 1e-9) return samples_[k];
  if (std::abs(frac - 1.0) < 1e-9) return samples_[k + 1];
  CauchyPair mix = (1.0 - frac) * samples_[k] + frac * samples_[k + 1];
  mix.time_stamp = t;
  return mix;
}

CauchyPair free_flow(const CauchyPair& data, double t) {
  const GridSpec& g = data.grid();
  std::vector<Complex> pos = forward_transform(data.position)->coeff;
  std::vector<Complex> vel = forward_transform(data.velocity)->coeff;
  rotate_pair(g, pos, vel, t);
  return CauchyPair(inverse_transform(make_spectrum(g, std::move(pos))),
                    inverse_transform(make_spectrum(g, std::move(vel))),
                    data.time_stamp + t);
}

Trajectory free_trajectory(const CauchyPair& data, double dt, double T) {
  const auto m = step_count(dt, T, "free_trajectory");
  const GridSpec& g = data.grid();
  const SpectrumPtr s0 = forward_transform(data.position);
  const SpectrumPtr s1 = forward_transform(data.velocity);

  std::vector<CauchyPair> samples;
  samples.reserve(static_cast<std::size_t>(m) + 1);
  for (std::int64_t k = 0; k <= m; ++k) {
    std::vector<Complex> pos = s0->coeff;
    std::vector<Complex> vel = s1->coeff;
    rotate_pair(g, pos, vel, static_cast<double>(k) * dt);
    samples.emplace_back(inverse_transform(make_spectrum(g, std::move(pos))),
                         inverse_transform(make_spectrum(g, std::move(vel))),
                         data.time_stamp + static_cast<double>(k) * dt);
  }
  return Trajectory(std::move(samples), "free");
}

RealField wave_kernel(const RealField& f, double t) {
  return apply_multiplier(f, [t](const Vec3& xi) {
    const double om = std::sqrt(1.0 + xi.norm2());
    return std::sin(t * om) / om;
  });
}

RealField duhamel(const std::vector<RealField>& forcing, double dt, double t) {
  if (forcing.empty()) throw std::invalid_argument("duhamel: empty forcing");
  const GridSpec& g = forcing.front().grid();
  if (t == 0.0) return RealField(g);
  const auto m = step_count(dt, t, "duhamel");
  if (m + 1 > static_cast<std::int64_t>(forcing.size()))
    throw std::invalid_argument("duhamel: t beyond the forcing horizon");

  std::vector<Complex> acc(static_cast<std::size_t>(spectrum_size(g)), Complex(0.0));
  for (std::int64_t k = 0; k <= m; ++k) {
    require_same_grid(forcing[static_cast<std::size_t>(k)].grid(), g, "duhamel");
    const double weight = (k == 0 || k == m) ? 0.5 * dt : dt;
    const double lag = static_cast<double>(m - k) * dt;
    const SpectrumPtr fs = forward_transform(forcing[static_cast<std::size_t>(k)]);
    for_each_mode(g, [&](std::int64_t idx, const Vec3& xi, int) {
      const double om = std::sqrt(1.0 + xi.norm2());
      acc[static_cast<std::size_t>(idx)] +=
          weight * (std::sin(lag * om) / om) * fs->coeff[static_cast<std::size_t>(idx)];
    });
  }
  return inverse_transform(make_spectrum(g, std::move(acc)));
}

Trajectory duhamel_series(const std::vector<RealField>& forcing, double dt) {
  if (forcing.size() < 2) throw std::invalid_argument("duhamel_series: need at least two samples");
  if (!(dt > 0.0)) throw std::invalid_argument("duhamel_series: dt must be positive");
  const GridSpec& g = forcing.front().grid();
  const auto nsp = static_cast<std::size_t>(spectrum_size(g));

  std::vector<Complex> pos(nsp, Complex(0.0));  // w = 0 at t = 0
  std::vector<Complex> vel(nsp, Complex(0.0));

  std::vector<CauchyPair> samples;
  samples.reserve(forcing.size());
  samples.emplace_back(RealField(g), RealField(g), 0.0);

  SpectrumPtr fk = forward_transform(forcing.front());
  for (std::size_t k = 1; k < forcing.size(); ++k) {
    require_same_grid(forcing[k].grid(), g, "duhamel_series");
    // (w, w_t) <- F(dt) [ (w, w_t) + (0, dt/2 f_k) ] + (0, dt/2 f_{k+1}).
    for (std::size_t i = 0; i < nsp; ++i) vel[i] += 0.5 * dt * fk->coeff[i];
    rotate_pair(g, pos, vel, dt);
    fk = forward_transform(forcing[k]);
    for (std::size_t i = 0; i < nsp; ++i) vel[i] += 0.5 * dt * fk->coeff[i];

    samples.emplace_back(inverse_transform(make_spectrum(g, pos)),
                         inverse_transform(make_spectrum(g, vel)),
                         static_cast<double>(k) * dt);
  }
  return Trajectory(std::move(samples), "duhamel-series");
}

SpaceTimeNormRecord spacetime_norm(const Trajectory& traj, double q, double r) {
  if (!(q >= 1.0) || !(r >= 1.0))
    throw std::invalid_argument("spacetime_norm: q and r must be >= 1 (or infinite)");
  SpaceTimeNormRecord rec;
  rec.q = q;
  rec.r = r;
  rec.dt = traj.dt();
  rec.T = traj.horizon();

  if (std::isinf(q)) {
    double sup = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k)
      sup = std::max(sup, lebesgue_norm(traj[k].position, r));
    rec.value = sup;
    return rec;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double weight = (k == 0 || k + 1 == traj.size()) ? 0.5 : 1.0;
    acc += weight * std::pow(lebesgue_norm(traj[k].position, r), q) * traj.dt();
  }
  rec.value = std::pow(acc, 1.0 / q);
  return rec;
}

double resolution_norm(const DyadicBank& bank, const Trajectory& traj, double mu,
                       const std::vector<AdmissibleTriple>& triples) {
  require_same_grid(bank.grid(), traj.grid(), "resolution_norm");

  double best = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k)
    best = std::max(best, sobolev_norm(traj[k].position, mu));

  for (const AdmissibleTriple& tr : triples) {
    if (!validate_admissible(tr.q, tr.r, tr.theta))
      throw std::invalid_argument("resolution_norm: inadmissible (q, r, theta) triple");
    const double sigma =
        mu + inv_or_zero(tr.q) - (3.0 + tr.theta) * (0.5 - inv_or_zero(tr.r));
    const BesovParams bp{sigma, tr.r, 2.0, false};

    if (std::isinf(tr.q)) {
      double sup = 0.0;
      for (std::size_t k = 0; k < traj.size(); ++k)
        sup = std::max(sup, besov_norm(bank, traj[k].position, bp));
      best = std::max(best, sup);
    } else {
      double acc = 0.0;
      for (std::size_t k = 0; k < traj.size(); ++k) {
        const double weight = (k == 0 || k + 1 == traj.size()) ? 0.5 : 1.0;
        acc += weight * std::pow(besov_norm(bank, traj[k].position, bp), tr.q) * traj.dt();
      }
      best = std::max(best, std::pow(acc, 1.0 / tr.q));
    }
  }
  return best;
}

std::optional<double> strichartz_ratio(const CauchyPair& data, int j, const AdmissibleTriple& triple,
                                       double dt, double T) {
  if (!validate_admissible(triple.q, triple.r, triple.theta))
    throw std::invalid_argument("strichartz_ratio: inadmissible triple");
  const double den_data =
      lebesgue_norm(data.position, 2.0) + std::ldexp(1.0, -j) * lebesgue_norm(data.velocity, 2.0);
  if (den_data == 0.0) return std::nullopt;

  const Trajectory traj = free_trajectory(data, dt, T);
  const double value = spacetime_norm(traj, triple.q, triple.r).value;
  const double expo =
      j * ((3.0 + triple.theta) / 2.0 - (3.0 + triple.theta) * inv_or_zero(triple.r) -
           inv_or_zero(triple.q));
  return value / (std::pow(2.0, expo) * den_data);
}

PreciseSlopeResult precise_strichartz_slope(const DyadicBank& bank, int j, double r,
                                            const std::vector<double>& h_list, int trials,
                                            double dt, double T, std::uint64_t seed) {
  if (h_list.size() < 3)
    throw std::invalid_argument("precise_strichartz_slope: need at least three radii");
  for (double h : h_list)
    if (!(h > 0.0) || !(h < 0.125))
      throw std::invalid_argument("precise_strichartz_slope: every h must lie in (0, 1/8)");
  if (!(r >= 2.0)) throw std::invalid_argument("precise_strichartz_slope: r must be >= 2");
  if (trials < 1) throw std::invalid_argument("precise_strichartz_slope: need at least one trial");
  const GridSpec& g = bank.grid();
  if (T > 0.25 * g.box_length() + 1e-12)
    throw std::invalid_argument("precise_strichartz_slope: T must stay within L/4");

  // Sharp theta = 0 admissibility line: 1/q = 1/2 - 1/r (q = inf at r = 2).
  const double q = (r == 2.0) ? INFINITY : 1.0 / (0.5 - 1.0 / r);

  // One ball center for all radii: magnitude 2^j when that fits below the
  // dealiased band, otherwise pushed down just enough for the largest ball.
  const double h_max = *std::max_element(h_list.begin(), h_list.end());
  const double scale = std::ldexp(1.0, j);
  double c = std::min(scale, bank.grid().dealias_band() - h_max * scale - 1e-9);
  if (!(c >= std::ldexp(1.0, j - 2)))
    throw std::invalid_argument("precise_strichartz_slope: grid cannot host level-j balls");
  const Vec3 center{c, 0.0, 0.0};

  const double expo = j * (1.5 - 3.0 * inv_or_zero(r) - inv_or_zero(q));
  const double norm_scale = std::pow(2.0, expo);

  std::vector<double> slopes(static_cast<std::size_t>(trials), 0.0);
  std::vector<double> residuals(static_cast<std::size_t>(trials), 0.0);

  parallel_for(trials, [&](int trial) {
    Rng rng(seed + static_cast<std::uint64_t>(trial) * 0x9e3779b97f4a7c15ull);
    RealField noise0 = white_noise(g, rng);
    RealField noise1 = white_noise(g, rng);

    std::vector<double> xs, ys;
    xs.reserve(h_list.size());
    ys.reserve(h_list.size());
    for (double h : h_list) {
      const BallWindow w{center, j, h};
      CauchyPair data(ball_localize(bank, noise0, w), ball_localize(bank, noise1, w), 0.0);
      const double den = lebesgue_norm(data.position, 2.0) +
                         std::ldexp(1.0, -j) * lebesgue_norm(data.velocity, 2.0);
      const double value = spacetime_norm(free_trajectory(data, dt, T), q, r).value;
      xs.push_back(std::log(h));
      ys.push_back(std::log(value / (norm_scale * den)));
    }

    // Unweighted least squares through the log-log points.
    const auto npts = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= npts;
    my /= npts;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - my - slope * (xs[i] - mx);
      rss += e * e;
    }
    slopes[static_cast<std::size_t>(trial)] = slope;
    residuals[static_cast<std::size_t>(trial)] = std::sqrt(rss / npts);
  });

  PreciseSlopeResult out;
  out.trial_slopes = slopes;
  out.center = center;
  for (int i = 0; i < trials; ++i) {
    out.slope += slopes[static_cast<std::size_t>(i)];
    out.fit_residual += residuals[static_cast<std::size_t>(i)];
  }
  out.slope /= trials;
  out.fit_residual /= trials;
  return out;
}

}  // namespace kgh

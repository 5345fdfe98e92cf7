// Inequality probes: the fractional-potential Lebesgue ratio, trilinear
// integral-equation ratio, interaction-term ratios, commutator residual and
// bound, the bilinear symbol band, and the space-time pairing bounds.
// Closed-form oracles: multiplier scaling laws on single modes, exact
// homogeneity invariances, separable time integrals, and the analytic
// symbol band.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "kgh/dynamics.hpp"
#include "kgh/lp.hpp"
#include "kgh/probes.hpp"
#include "kgh/propagator.hpp"
#include "kgh/random_fields.hpp"
#include "kgh/spectral_ops.hpp"
#include "test_helpers.hpp"

using namespace kgh;
using kgh_test::cosine_sum;
using kgh_test::max_abs;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Trajectory static_trajectory(const CauchyPair& state, double dt, int steps) {
  std::vector<CauchyPair> samples;
  for (int k = 0; k <= steps; ++k)
    samples.emplace_back(state.position, state.velocity, state.time_stamp + k * dt);
  return Trajectory(std::move(samples), "static");
}

}  // namespace

TEST_CASE("potential Lebesgue exponent: the displayed relation and its rejections") {
  CHECK(hls_exponent(2.0, 2.5) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(hls_exponent(2.0, 2.4) == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(hls_exponent(1.0, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(hls_exponent(6.0, 2.5), std::invalid_argument);   // q = infinity
  CHECK_THROWS_AS(hls_exponent(8.0, 2.5), std::invalid_argument);   // q < 0
  CHECK_THROWS_AS(hls_exponent(2.0, 3.0), std::invalid_argument);
}

TEST_CASE("potential Lebesgue ratio: homogeneity and the multiplier scaling law") {
  const GridSpec g(16, kTwoPi, 2.5);
  const double gamma = 2.5;
  const RealField f1 = cosine_sum(g, {{1, 0, 0}}, {1.0});
  const RealField f3 = cosine_sum(g, {{3, 0, 0}}, {1.0});

  const double base = hls_ratio(f1, 2.0, gamma).ratio;
  CHECK(base > 0.0);
  // Amplitude scaling cancels exactly.
  CHECK(hls_ratio(5.0 * f1, 2.0, gamma).ratio == doctest::Approx(base).epsilon(1e-12));
  // cos(3x) takes the same grid values as cos(x) (3 is invertible mod 16),
  // so the Lebesgue norms coincide and the ratio scales as |xi|^{gamma-3}.
  CHECK(hls_ratio(f3, 2.0, gamma).ratio ==
        doctest::Approx(std::pow(3.0, gamma - 3.0) * base).epsilon(1e-12));

  // Mean-carrying and zero inputs are rejected.
  const RealField with_mean(g, std::vector<double>(g.point_count(), 0.3));
  CHECK_THROWS_AS(hls_ratio(f1 + with_mean, 2.0, gamma), std::invalid_argument);
  CHECK_THROWS_AS(hls_ratio(RealField(g), 2.0, gamma), std::invalid_argument);
}

TEST_CASE("potential Lebesgue sweep: bounded spread and bit reproducibility") {
  const GridSpec g(16, kTwoPi, 2.5);
  const ProbeReport report = hls_sweep(g, 2.0, 2.5, 25, 777);
  CHECK(report.probe == "hls");
  CHECK(report.ratios.size() == 25);
  CHECK(report.min > 0.0);
  CHECK(report.maxmin_ratio < 20.0);
  CHECK(report.params.at("q") == doctest::Approx(3.0).epsilon(1e-14));

  const ProbeReport again = hls_sweep(g, 2.0, 2.5, 25, 777);
  for (std::size_t i = 0; i < report.ratios.size(); ++i)
    CHECK(report.ratios[i] == again.ratios[i]);

  const ProbeReport shifted = hls_sweep(g, 2.0, 2.5, 25, 778);
  CHECK(shifted.ratios.front() != report.ratios.front());
}

TEST_CASE("trilinear ratio: zero data signaled, amplitude invariance, bounded sweep") {
  const GridSpec g(16, M_PI, 2.5);  // j_max = 2
  const DyadicBank bank = DyadicBank::build(g);
  const std::vector<AdmissibleTriple> triples = {{3.0, 6.0, 0.5}};
  const double mu = g.gamma() / 6.0;

  const TrilinearProbe zero = trilinear_ratio(bank, CauchyPair::zero(g), mu, triples,
                                              1.0 / 16.0, 0.25);
  CHECK(zero.undefined);

  const CauchyPair draw = power_law_pair(g, 0.7, 1.0, 555);
  const CauchyPair high(draw.position - bank.low_pass(draw.position, 1),
                        draw.velocity - bank.low_pass(draw.velocity, 1));
  const TrilinearProbe probe = trilinear_ratio(bank, high, mu, triples, 1.0 / 16.0, 0.25);
  CHECK_FALSE(probe.undefined);
  CHECK(probe.ratio > 0.0);
  const TrilinearProbe scaled =
      trilinear_ratio(bank, 3.0 * high, mu, triples, 1.0 / 16.0, 0.25);
  CHECK(scaled.ratio == doctest::Approx(probe.ratio).epsilon(1e-10));

  const ProbeReport sweep = trilinear_sweep(bank, mu, triples, 1.0 / 16.0, 0.25, 20, 9001);
  CHECK(sweep.ratios.size() == 20);
  CHECK(sweep.min > 0.0);
  CHECK(sweep.maxmin_ratio < 10.0);
  CHECK_FALSE(sweep.notes.empty());
}

TEST_CASE("interaction ratios: zero low field, static time scaling, random sweep") {
  const GridSpec g(16, kTwoPi, 2.4);
  const double gamma = 2.4;
  const double dt = 1.0 / 16.0;

  const Trajectory zero_u = free_trajectory(CauchyPair::zero(g), dt, 0.25);
  const Trajectory some_v = free_trajectory(power_law_pair(g, 0.7, 0.5, 11), dt, 0.25);
  const InteractionRatios vanished = local_nonlinear_ratios(zero_u, some_v, gamma, 0.25);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(vanished.lhs[i] == 0.0);
    CHECK_FALSE(vanished.defined[i]);
  }

  // Static fields: the cubic self-interaction bound and its measured side
  // are both exactly linear in T, so the first ratio is T-independent.
  const double c = g.box_length() / 2.0;
  const CauchyPair u_state(gaussian_bump(g, 0.8, 0.9, Vec3{c, c, c}), RealField(g));
  const CauchyPair v_state(cosine_sum(g, {{0, 0, 3}}, {0.4}), RealField(g));
  const Trajectory u_static = static_trajectory(u_state, dt, 8);
  const Trajectory v_static = static_trajectory(v_state, dt, 8);
  const InteractionRatios half = local_nonlinear_ratios(u_static, v_static, gamma, 0.25);
  const InteractionRatios full = local_nonlinear_ratios(u_static, v_static, gamma, 0.5);
  CHECK(half.ratio[0] == doctest::Approx(full.ratio[0]).epsilon(1e-12));
  CHECK(half.names[0] == "I(u^2)u");

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Trajectory u = free_trajectory(power_law_pair(g, 0.8, 0.7, 100 + seed), dt, 0.25);
    const Trajectory v = free_trajectory(power_law_pair(g, 0.6, 0.5, 200 + seed), dt, 0.25);
    const InteractionRatios ratios = local_nonlinear_ratios(u, v, gamma, 0.25);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(ratios.defined[i]);
      CHECK(std::isfinite(ratios.ratio[i]));
      CHECK(ratios.ratio[i] > 0.0);
    }
    CHECK(ratios.u_h1_sup > 0.0);
    CHECK(ratios.v_alpha_proxy > 0.0);
    CHECK(ratios.v_beta_proxy > 0.0);
  }

  const Trajectory coarse = free_trajectory(power_law_pair(g, 0.8, 0.7, 1), 1.0 / 8.0, 0.25);
  CHECK_THROWS_AS(local_nonlinear_ratios(coarse, some_v, gamma, 0.25), std::invalid_argument);
}

TEST_CASE("commutator residual: exact vanishing cases and the cancellation gain") {
  const GridSpec g(64, M_PI / 2.0, 2.5);  // j_max = 5
  const DyadicBank bank = DyadicBank::build(g);
  const double gamma = 2.5;

  const RealField v = random_mean_zero_gaussian(g, 501);
  const RealField constant(g, std::vector<double>(g.point_count(), 1.7));
  const CommutatorResidual pulled_out = commutator_residual(bank, v, constant, 4, gamma);
  CHECK(pulled_out.l2 <= 1e-12 * pulled_out.proxy);

  // Data without level-j content leaves nothing to commute.
  const RealField low_mode = cosine_sum(g, {{1, 0, 0}}, {1.0});  // |xi| = 4
  const RealField u = power_law_pair(g, 1.0, 0.5, 733).position;
  const CommutatorResidual empty = commutator_residual(bank, low_mode, u, 5, gamma);
  CHECK(empty.l2 <= 1e-12);  // transform round-trip noise only (~1e-21)

  // Random fields: the commutator cancels more than half of the
  // no-cancellation proxy at high j.
  for (int j : {4, 5}) {
    const CommutatorResidual residual = commutator_residual(bank, v, u, j, gamma);
    CHECK(residual.l2 > 0.0);
    CHECK(residual.proxy / residual.l2 > 2.0);
  }

  CHECK_THROWS_AS(commutator_residual(bank, v, u, 1, gamma), std::invalid_argument);
  CHECK_THROWS_AS(commutator_residual(bank, v, u, bank.j_max() + 1, gamma),
                  std::invalid_argument);
}

TEST_CASE("commutator bound: homogeneity, j-uniform sweep, and degenerate input") {
  const GridSpec g(64, M_PI / 2.0, 2.5);
  const DyadicBank bank = DyadicBank::build(g);
  const double gamma = 2.5;
  const RealField u = power_law_pair(g, 1.0, 0.5, 733).position;
  const RealField v = random_mean_zero_gaussian(g, 501);

  const CommutatorBound base = commutator_bound_check(bank, v, u, 4, 4.0, gamma);
  CHECK_FALSE(base.undefined);
  CHECK(base.ratio > 0.0);
  CHECK(commutator_bound_check(bank, v, 2.0 * u, 4, 4.0, gamma).ratio ==
        doctest::Approx(base.ratio).epsilon(1e-12));
  CHECK(commutator_bound_check(bank, 3.0 * v, u, 4, 4.0, gamma).ratio ==
        doctest::Approx(base.ratio).epsilon(1e-12));

  const ProbeReport sweep = commutator_sweep(bank, v, u, {3, 4, 5}, 4.0, gamma);
  CHECK(sweep.ratios.size() == 3);
  CHECK(sweep.maxmin_ratio < 4.0);

  CHECK_THROWS_AS(commutator_bound_check(bank, v, u, 4, 2.0, gamma), std::invalid_argument);
  CHECK_THROWS_AS(commutator_bound_check(bank, v, u, 4, INFINITY, gamma),
                  std::invalid_argument);
  CHECK(commutator_bound_check(bank, RealField(g), u, 4, 4.0, gamma).undefined);
}

TEST_CASE("bilinear symbol: exact unit values, collinear closed form, sampled band") {
  const double gamma = 2.5;
  const int j = 5;
  const Vec3 xi1{32.0, 0.0, 0.0};

  CHECK(coifman_meyer_symbol(xi1, Vec3{0, 0, 0}, 0.7, j, gamma) == 1.0);
  CHECK(coifman_meyer_symbol(xi1, Vec3{5.0, 1.0, 0.0}, 0.0, j, gamma) == 1.0);

  // Antiparallel xi2 shortens the sum and raises the magnitude:
  // (24/32)^{gamma-4} with xi2 = -8 e1, lambda = 1.
  CHECK(coifman_meyer_symbol(xi1, Vec3{-8.0, 0.0, 0.0}, 1.0, j, gamma) ==
        doctest::Approx(std::pow(0.75, gamma - 4.0)).epsilon(1e-14));

  CHECK_THROWS_AS(coifman_meyer_symbol(Vec3{8.0, 0, 0}, Vec3{1, 0, 0}, 0.5, j, gamma),
                  std::invalid_argument);
  CHECK_THROWS_AS(coifman_meyer_symbol(xi1, Vec3{12.0, 0, 0}, 0.5, j, gamma),
                  std::invalid_argument);
  CHECK_THROWS_AS(coifman_meyer_symbol(xi1, Vec3{1, 0, 0}, 1.2, j, gamma),
                  std::invalid_argument);
  CHECK_THROWS_AS(coifman_meyer_symbol(xi1, Vec3{1, 0, 0}, 0.5, 1, gamma),
                  std::invalid_argument);

  const SymbolCertificate certificate = coifman_meyer_certificate(j, gamma, 5);
  CHECK(certificate.within);
  CHECK(certificate.samples > 10000);
  CHECK(certificate.lower == doctest::Approx(std::pow(2.0, gamma - 4.0)).epsilon(1e-15));
  CHECK(certificate.upper == doctest::Approx(std::pow(2.0, 4.0 - gamma)).epsilon(1e-15));
  CHECK(certificate.max_magnitude > 1.0);
  CHECK(certificate.min_magnitude < 1.0);
  CHECK(certificate.max_magnitude <= certificate.upper);
  CHECK(certificate.min_magnitude >= certificate.lower);
}

TEST_CASE("pairing bounds: zero free wave and the separable single-mode integral") {
  const GridSpec g(16, kTwoPi, 2.5);
  const double gamma = 2.5;
  const double r1 = 3.3, r2 = 40.0;
  const double dt = 0.01;
  const int steps = 440;  // T = 4.4, several periods of the forced mode

  const CauchyPair u_state(cosine_sum(g, {{0, 0, 1}}, {0.9}),
                           cosine_sum(g, {{0, 0, 1}}, {0.6}));
  const Trajectory u_static = static_trajectory(u_state, dt, steps);

  const PairingBoundReport quiet = lemma6_bound_check(
      u_static, CauchyPair::zero(g), 3, 0.65, gamma, r1, r2, 4.4, 1.0);
  CHECK(quiet.i33 == 0.0);
  CHECK(quiet.i34 == 0.0);
  CHECK(quiet.ratio33 == 0.0);
  CHECK_FALSE(quiet.undefined);

  // v_F = A cos(omega t) cos(3 z): time separates, so
  // i33 = |<I(u^2) cos(3z), u_t>| * |sin(omega T)| / omega.
  const CauchyPair v_data(cosine_sum(g, {{0, 0, 3}}, {0.8}), RealField(g));
  const double omega = std::sqrt(1.0 + 9.0);
  const double T = 4.4;
  const RealField iu2 =
      riesz_potential(dealias_truncate(pointwise_product(u_state.position, u_state.position)),
                      gamma);
  const double space_factor =
      inner_product(pointwise_product(iu2, v_data.position), u_state.velocity);
  const double predicted = std::abs(space_factor * std::sin(omega * T) / omega);

  const PairingBoundReport report =
      lemma6_bound_check(u_static, v_data, 3, 0.65, gamma, r1, r2, T, 1.0);
  CHECK(report.i33 == doctest::Approx(predicted).epsilon(1e-3));
  CHECK(report.rhs33 > 0.0);
  CHECK(report.ratio33 > 0.0);
  // The oscillatory integral stays bounded while T * |space factor| grows.
  CHECK(report.i33 < 0.1 * T * std::abs(space_factor));
  CHECK(report.hypothesis_warning == (report.hypothesis_ratio > 10.0));

  // A small static state stays within the growth hypothesis.
  const CauchyPair tiny(cosine_sum(g, {{0, 0, 1}}, {1e-3}), RealField(g));
  const PairingBoundReport calm = lemma6_bound_check(
      static_trajectory(tiny, dt, steps), v_data, 3, 0.65, gamma, r1, r2, T, 1.0);
  CHECK_FALSE(calm.hypothesis_warning);

  CHECK_THROWS_AS(lemma6_bound_check(u_static, v_data, 3, 0.65, gamma, 2.0, r2, T, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(lemma6_bound_check(u_static, v_data, 3, 0.65, gamma, r1, r2, T, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(lemma6_bound_check(u_static, v_data, 3, 0.65, gamma, r1, r2, 0.0, 1.0),
                  std::invalid_argument);
  CauchyPair late = v_data;
  late.time_stamp = 0.25;
  CHECK_THROWS_AS(lemma6_bound_check(u_static, late, 3, 0.65, gamma, r1, r2, T, 1.0),
                  std::invalid_argument);
}

TEST_CASE("pairing bounds: ratios stay within a decade across the cut sweep") {
  const GridSpec g(64, M_PI / 2.0, 2.4);  // j_max = 5
  const DyadicBank bank = DyadicBank::build(g);
  const double gamma = 2.4, s = 0.65, r1 = 3.3, r2 = 40.0;
  const double dt = 1.0 / 32.0, T = 0.5;

  const CauchyPair data = power_law_pair(g, s, 0.05, 55);
  const auto [es_pos, es_vel] = sobolev_norm(data, s);
  const double es = es_pos + es_vel;

  std::vector<double> ratios33, ratios34;
  for (int J : {3, 4, 5}) {
    const CauchyPair low(bank.low_pass(data.position, J), bank.low_pass(data.velocity, J));
    const CauchyPair high(data.position - low.position, data.velocity - low.velocity);
    const Trajectory u = free_trajectory(low, dt, T);
    const PairingBoundReport report =
        lemma6_bound_check(u, high, J, s, gamma, r1, r2, T, es);
    REQUIRE_FALSE(report.undefined);
    ratios33.push_back(report.ratio33);
    ratios34.push_back(report.ratio34);
  }
  const auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
  };
  for (double r : ratios33) CHECK(r > 0.0);
  for (double r : ratios34) CHECK(r > 0.0);
  CHECK(spread(ratios33) < 10.0);
  CHECK(spread(ratios34) < 10.0);
}

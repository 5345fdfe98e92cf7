// Dyadic frequency decomposition: cutoff profile geometry, the exact
// partition of unity, block/low-pass algebra, Besov norms against direct
// radial-profile oracles, ball-shaped localization, and Bernstein ratios
// with closed-form single-mode values.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "kgh/lp.hpp"
#include "kgh/random_fields.hpp"
#include "kgh/spectral_ops.hpp"
#include "kgh/transform.hpp"
#include "test_helpers.hpp"

using namespace kgh;
using kgh_test::cosine_sum;
using kgh_test::max_abs_diff;
using kgh_test::max_abs;

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

TEST_CASE("cutoff profiles have the mandated supports and plateaus") {
  // chi: 1 on [0, 3/4], supported in [0, 4/3].
  CHECK(chi_profile(0.0) == 1.0);
  CHECK(chi_profile(0.75) == 1.0);
  CHECK(chi_profile(1.0) > 0.0);
  CHECK(chi_profile(1.0) < 1.0);
  CHECK(chi_profile(4.0 / 3.0) == 0.0);
  CHECK(chi_profile(2.0) == 0.0);

  // phi: supported in [3/4, 8/3], equal to 1 on [4/3, 3/2].
  CHECK(phi_profile(0.5) == 0.0);
  CHECK(phi_profile(0.75) == 0.0);
  CHECK(phi_profile(1.0) > 0.0);
  CHECK(phi_profile(4.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi_profile(1.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi_profile(2.0) > 0.0);
  CHECK(phi_profile(2.0) < 1.0);
  CHECK(phi_profile(8.0 / 3.0) == 0.0);
  CHECK(phi_profile(3.0) == 0.0);

  // chi + phi telescopes: chi(t) + phi(t) = chi(t/2) pointwise.
  for (double t = 0.01; t < 6.0; t += 0.0173)
    CHECK(chi_profile(t) + phi_profile(t) == doctest::Approx(chi_profile(0.5 * t)).epsilon(1e-15));
}

TEST_CASE("profile partition of unity is exact at every grid wavevector") {
  for (int n : {16, 32}) {
    GridSpec g(n, kTwoPi, 2.5);
    double worst = 0.0;
    for_each_mode(g, [&](std::int64_t, const Vec3& xi, int) {
      const double t = xi.norm();
      double sum = chi_profile(t);
      for (int j = 0; j <= 12; ++j) sum += phi_profile(std::ldexp(t, -j));
      worst = std::max(worst, std::abs(sum - 1.0));
    });
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("annuli two or more levels apart are disjoint") {
  for (double t = 0.01; t < 20.0; t += 0.0311) {
    CHECK(phi_profile(t) * phi_profile(4.0 * t) == 0.0);
    CHECK(phi_profile(t) * phi_profile(8.0 * t) == 0.0);
    CHECK(chi_profile(t) * phi_profile(0.25 * t) == 0.0);  // chi vs level >= 1
  }
}

TEST_CASE("bank level counts follow the dealiased band") {
  // j_max = floor(log2(band * 3/8)); smallest resolved annulus from xi0.
  DyadicBank coarse = DyadicBank::build(GridSpec(32, kTwoPi, 2.5));
  CHECK(coarse.j_max() == 2);
  CHECK(coarse.j_min_resolved() == -1);
  CHECK(coarse.partition_band() == doctest::Approx(6.0));

  DyadicBank mid = DyadicBank::build(GridSpec(32, M_PI, 2.5));
  CHECK(mid.j_max() == 3);
  CHECK(mid.j_min_resolved() == 0);
  CHECK(mid.partition_band() == doctest::Approx(12.0));

  DyadicBank fine = DyadicBank::build(GridSpec(128, 0.5 * M_PI, 2.5));
  CHECK(fine.j_max() == 6);
  CHECK(fine.j_min_resolved() == 1);
  CHECK(fine.partition_band() == doctest::Approx(96.0));

  // Too few resolvable blocks: rejected.
  CHECK_THROWS_AS(DyadicBank::build(GridSpec(16, kTwoPi, 2.5)), std::invalid_argument);
  CHECK_THROWS_AS(DyadicBank::build(GridSpec(8, kTwoPi, 2.5)), std::invalid_argument);
}

TEST_CASE("blocks select the expected annuli") {
  GridSpec g(32, kTwoPi, 2.5);
  DyadicBank bank = DyadicBank::build(g);

  // Disjoint support: a mode far above (or below) the annulus is annihilated.
  RealField high = cosine_sum(g, {{8, 0, 0}}, {1.0});
  CHECK(max_abs(bank.block(high, 0)) < 1e-14);   // phi(8) = 0
  RealField low = cosine_sum(g, {{1, 0, 0}}, {1.0});
  CHECK(max_abs(bank.block(low, 2)) < 1e-14);    // phi(1/4) = 0

  // A mode at |xi| = 2^j is shared by exactly blocks j and j-1.
  for (int j : {1, 2}) {
    RealField f = cosine_sum(g, {{1 << j, 0, 0}}, {1.0});
    RealField two = bank.block(f, j) + bank.block(f, j - 1);
    CHECK(max_abs_diff(two, f) < 1e-12);
  }
  // Same at |xi| = 1 where the partner is the chi block.
  RealField f1 = cosine_sum(g, {{0, 1, 0}}, {1.0});
  CHECK(max_abs_diff(bank.block(f1, 0) + bank.block(f1, -1), f1) < 1e-12);

  // Convention: Delta_j = 0 for j <= -2; out-of-range blocks alias and throw.
  CHECK(max_abs(bank.block(f1, -2)) == 0.0);
  CHECK(max_abs(bank.block(f1, -7)) == 0.0);
  CHECK_THROWS_AS(bank.block(f1, 3), std::invalid_argument);

  // Field and spectrum overloads agree.
  RealField rnd = random_mean_zero_gaussian(g, 31);
  RealField via_spec = inverse_transform(bank.block(forward_transform(rnd), 1));
  CHECK(max_abs_diff(via_spec, bank.block(rnd, 1)) < 1e-14);
}

TEST_CASE("truncated block sum reproduces fields below the partition band") {
  GridSpec g(32, kTwoPi, 2.5);
  DyadicBank bank = DyadicBank::build(g);  // partition band = 6

  RealField f = cosine_sum(g, {{1, 0, 0}, {2, 1, 0}, {3, 3, 3}, {0, 5, 0}},
                           {1.0, 0.5, 0.25, -0.8});
  RealField sum(g);
  for (int j = -1; j <= bank.j_max(); ++j) sum = sum + bank.block(f, j);
  CHECK(max_abs_diff(sum, f) < 1e-12);
}

TEST_CASE("low-pass operators telescope against blocks") {
  GridSpec g(32, kTwoPi, 2.5);
  DyadicBank bank = DyadicBank::build(g);
  RealField f = random_mean_zero_gaussian(g, 77);

  // S_{j+1} - S_j = Delta_j.
  for (int j : {0, 1}) {
    RealField lhs = bank.low_pass(f, j + 1) - bank.low_pass(f, j);
    CHECK(max_abs_diff(lhs, bank.block(f, j)) < 1e-12);
  }
  // S_0 = Delta_{-1} (empty sum plus the chi block).
  CHECK(max_abs_diff(bank.low_pass(f, 0), bank.block(f, -1)) < 1e-13);
  // S_{-1} = 0.
  CHECK(max_abs(bank.low_pass(f, -1)) == 0.0);
  CHECK_THROWS_AS(bank.low_pass(f, 3), std::invalid_argument);

  // f supported in {|xi| <= 2^{J-2}}: S_J f = f, so the high part vanishes.
  RealField lowf = cosine_sum(g, {{1, 0, 0}, {0, 1, 0}}, {1.0, 2.0});
  RealField passed = bank.low_pass(lowf, 2);
  CHECK(max_abs_diff(passed, lowf) < 1e-12);
  CHECK(max_abs(lowf - passed) < 1e-12);
}

TEST_CASE("almost-orthogonality of well-separated blocks") {
  GridSpec g(32, kTwoPi, 2.5);
  DyadicBank bank = DyadicBank::build(g);
  RealField f = random_mean_zero_gaussian(g, 5);
  RealField h = random_mean_zero_gaussian(g, 6);

  const double scale = lebesgue_norm(f, 2.0) * lebesgue_norm(h, 2.0);
  CHECK(std::abs(inner_product(bank.block(f, 0), bank.block(h, 2))) < 1e-12 * scale);
  CHECK(std::abs(inner_product(bank.block(f, -1), bank.block(h, 1))) < 1e-12 * scale);
  // Adjacent blocks do overlap.
  CHECK(std::abs(inner_product(bank.block(f, 1), bank.block(f, 2))) > 1e-12 * scale);
}

TEST_CASE("block square sum brackets the L2 norm for band-limited fields") {
  GridSpec g(32, kTwoPi, 2.5);
  DyadicBank bank = DyadicBank::build(g);
  auto env = [](const Vec3& xi) { return xi.norm() <= 5.0 ? std::pow(1.0 + xi.norm2(), -1.0) : 0.0; };
  Rng rng(13);
  RealField f = envelope_random_field(g, env, rng);

  double sq = 0.0;
  for (int j = -1; j <= bank.j_max(); ++j) {
    const double b = lebesgue_norm(bank.block(f, j), 2.0);
    sq += b * b;
  }
  const double l2sq = std::pow(lebesgue_norm(f, 2.0), 2.0);
  CHECK(sq <= 2.0 * l2sq);
  CHECK(sq >= 0.5 * l2sq);
}

TEST_CASE("Besov norm of a single mode matches the radial-profile oracle") {
  GridSpec g(32, kTwoPi, 2.5);
  DyadicBank bank = DyadicBank::build(g);
  const double s = 0.7;

  // Mode at |xi| = 4 = 2^2 intersects blocks 1 and 2 with weights phi(2),
  // phi(1); S_0 sees nothing (chi(4) = 0).  p = q = 2 makes each block norm
  // a pure profile value times ||f||_2.
  RealField f = cosine_sum(g, {{0, 0, 4}}, {1.0});
  const double l2 = lebesgue_norm(f, 2.0);
  const double expected =
      std::sqrt(std::pow(std::pow(2.0, 1.0 * s) * phi_profile(2.0), 2.0) +
                std::pow(std::pow(2.0, 2.0 * s) * phi_profile(1.0), 2.0)) *
      l2;
  const double got = besov_norm(bank, f, {s, 2.0, 2.0, false});
  CHECK(got == doctest::Approx(expected).epsilon(1e-12));

  // Two-block bracket with C <= 2.
  CHECK(got >= 0.5 * std::pow(2.0, (2 - 1) * s) * l2);
  CHECK(got <= 2.0 * std::pow(2.0, (2 + 1) * s) * l2);

  // q = infinity takes the sup of the same weighted profile values.
  const double expected_sup =
      std::max(std::pow(2.0, 1.0 * s) * phi_profile(2.0), std::pow(2.0, 2.0 * s) * phi_profile(1.0)) *
      l2;
  CHECK(besov_norm(bank, f, {s, 2.0, INFINITY, false}) ==
        doctest::Approx(expected_sup).epsilon(1e-12));

  CHECK(besov_norm(bank, RealField(g), {s, 2.0, 2.0, false}) == 0.0);
  CHECK_THROWS_AS(besov_norm(bank, f, {s, 0.5, 2.0, false}), std::invalid_argument);
  CHECK_THROWS_AS(besov_norm(bank, f, {s, 2.0, 0.0, false}), std::invalid_argument);
}

TEST_CASE("inhomogeneous Besov norm is bracketed by L2 plus the homogeneous norm") {
  GridSpec g(32, kTwoPi, 2.5);
  DyadicBank bank = DyadicBank::build(g);
  auto env = [](const Vec3& xi) { return xi.norm() <= 5.0 ? std::pow(1.0 + xi.norm2(), -1.2) : 0.0; };
  Rng rng(23);
  RealField f = envelope_random_field(g, env, rng);

  const double s = 0.6;
  const double inhom = besov_norm(bank, f, {s, 2.0, 2.0, false});
  const double homog = besov_norm(bank, f, {s, 2.0, 2.0, true});
  const double rhs = lebesgue_norm(f, 2.0) + homog;
  CHECK(inhom <= 2.0 * rhs);
  CHECK(inhom >= 0.5 * rhs);

  // s = 0, p = q = 2: the Besov norm is equivalent to L2 within factor 2.
  const double b0 = besov_norm(bank, f, {0.0, 2.0, 2.0, false});
  CHECK(b0 <= 2.0 * lebesgue_norm(f, 2.0));
  CHECK(b0 >= 0.5 * lebesgue_norm(f, 2.0));
}

TEST_CASE("ball localization projects onto paired frequency balls") {
  GridSpec g(32, kTwoPi, 2.5);
  DyadicBank bank = DyadicBank::build(g);

  // Window of radius 0.4 about 4*e2 (and its mirror, keeping fields real).
  BallWindow w{{0.0, 4.0, 0.0}, 2, 0.1};
  RealField inside = cosine_sum(g, {{0, 4, 0}}, {1.0});
  CHECK(max_abs_diff(ball_localize(bank, inside, w), inside) < 1e-12);

  RealField outside = cosine_sum(g, {{0, 5, 0}}, {1.0});
  CHECK(max_abs(ball_localize(bank, outside, w)) < 1e-14);

  RealField mixed = inside + outside;
  CHECK(max_abs_diff(ball_localize(bank, mixed, w), inside) < 1e-12);

  // Idempotent on random data.
  RealField f = random_mean_zero_gaussian(g, 3);
  RealField once = ball_localize(bank, f, w);
  CHECK(max_abs_diff(ball_localize(bank, once, w), once) < 1e-13);

  // Spectrum support is confined to the two balls.
  SpectrumPtr s = forward_transform(once);
  double leak = 0.0;
  for_each_mode(g, [&](std::int64_t idx, const Vec3& xi, int) {
    const double dp = (xi - w.center).norm();
    const double dm = (xi + w.center).norm();
    if (dp > 0.4 + 1e-9 && dm > 0.4 + 1e-9)
      leak = std::max(leak, std::abs(s->coeff[static_cast<std::size_t>(idx)]));
  });
  CHECK(leak < 1e-15);

  // A window is legal at levels above the bank's block range as long as it
  // stays inside the dealiased band (it is a scale parameter, not a block).
  BallWindow big{{8.0, 0.0, 0.0}, 5, 1.0 / 16.0};
  CHECK_NOTHROW(ball_localize(bank, f, big));

  // Validation: relative radius, center bracket, band inclusion.
  CHECK_THROWS_AS(ball_localize(bank, f, BallWindow{{0.0, 4.0, 0.0}, 2, 0.125}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ball_localize(bank, f, BallWindow{{0.0, 4.0, 0.0}, 2, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ball_localize(bank, f, BallWindow{{0.0, 0.5, 0.0}, 2, 0.1}),
                  std::invalid_argument);  // |c| < 2^{j-2}
  CHECK_THROWS_AS(ball_localize(bank, f, BallWindow{{0.0, 17.0, 0.0}, 2, 0.1}),
                  std::invalid_argument);  // |c| > 2^{j+2}
  CHECK_THROWS_AS(ball_localize(bank, f, BallWindow{{10.5, 0.0, 0.0}, 3, 0.1}),
                  std::invalid_argument);  // pokes past the band
}

TEST_CASE("Bernstein ratio has the closed form on single modes") {
  GridSpec g(32, kTwoPi, 2.5);
  DyadicBank bank = DyadicBank::build(g);
  const double vol = kTwoPi * kTwoPi * kTwoPi;

  // f = cos(4 x2): block 2 keeps a pure cosine, so the ratio is
  // (||cos||_q / ||cos||_p) / 2^{3j(1/p-1/q)} with exact trig integrals.
  RealField f = cosine_sum(g, {{0, 4, 0}}, {1.0});

  auto r2inf = bernstein_ratio(bank, f, 2, 2.0, INFINITY);
  REQUIRE(r2inf.has_value());
  CHECK(*r2inf == doctest::Approx(1.0 / (8.0 * std::sqrt(vol / 2))).epsilon(1e-12));

  auto r24 = bernstein_ratio(bank, f, 2, 2.0, 4.0);
  REQUIRE(r24.has_value());
  const double l4 = std::pow(3.0 * vol / 8, 0.25);
  const double l2 = std::sqrt(vol / 2);
  CHECK(*r24 == doctest::Approx((l4 / l2) / std::pow(2.0, 6.0 * 0.25)).epsilon(1e-12));

  // p = q: exactly 1 regardless of the data.
  RealField rnd = random_mean_zero_gaussian(g, 8);
  auto rpp = bernstein_ratio(bank, rnd, 1, 3.0, 3.0);
  REQUIRE(rpp.has_value());
  CHECK(*rpp == doctest::Approx(1.0).epsilon(1e-12));

  // Empty block: undefined ratio.
  CHECK_FALSE(bernstein_ratio(bank, f, 0, 2.0, 4.0).has_value());
  CHECK_THROWS_AS(bernstein_ratio(bank, f, 2, 4.0, 2.0), std::invalid_argument);
}

TEST_CASE("Bernstein ratios are level-uniform on saturating data") {
  // Box with six usable levels so the sweep spans j = 2..j_max = 5.
  GridSpec g(64, 0.5 * M_PI, 2.5);
  DyadicBank bank = DyadicBank::build(g);
  REQUIRE(bank.j_max() == 5);

  // The extremizers of || . ||_inf <= C 2^{3j/2} || . ||_2 on an annulus are
  // translates of the annulus kernel itself, i.e. the blocks of a point
  // mass.  A randomly placed lattice spike therefore probes sharpness at
  // every level at once; its ratios should be j-independent.
  Rng rng(91);
  const int n = g.n();
  std::vector<double> v(static_cast<std::size_t>(g.point_count()), 0.0);
  const auto site = static_cast<std::size_t>(rng.uniform() * static_cast<double>(g.point_count()));
  v[site] = 1.0;
  RealField spike(g, std::move(v));
  (void)n;

  double lo = INFINITY, hi = 0.0;
  for (int j = 2; j <= bank.j_max(); ++j) {
    auto r = bernstein_ratio(bank, spike, j, 2.0, INFINITY);
    REQUIRE(r.has_value());
    lo = std::min(lo, *r);
    hi = std::max(hi, *r);
  }
  CHECK(hi / lo < 8.0);

  // Dense random-phase data spreads its block energy uniformly, so its
  // ratios sit far below saturation (the inequality side), decaying with j
  // like 2^{-3j/2} * sqrt(log #modes).  Check the one-sided bound only.
  auto env = [](const Vec3& xi) {
    const double r = xi.norm();
    return r > 0.0 ? std::pow(r, -1.5) : 0.0;
  };
  RealField dense = envelope_random_field(g, env, rng);
  for (int j = 2; j <= bank.j_max(); ++j) {
    auto r = bernstein_ratio(bank, dense, j, 2.0, INFINITY);
    REQUIRE(r.has_value());
    CHECK(*r > 0.0);
    CHECK(*r <= hi);  // never beats the saturating translate family
  }
}

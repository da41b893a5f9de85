#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zzspec/curvature.hpp"
#include "zzspec/errors.hpp"
#include "zzspec/geometry.hpp"

using namespace zzspec;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

void boundaries(const CurvatureProfile& g, double a, Interval range, int n, std::vector<std::array<double, 2>>& up,
                std::vector<std::array<double, 2>>& lo) {
  const PlanarCurve c = reconstruct_curve(g, range, n);
  up.clear();
  lo.clear();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double nx = -std::sin(c.theta[i]), ny = std::cos(c.theta[i]);
    up.push_back({c.xi[i] + a * nx, c.eta[i] + a * ny});
    lo.push_back({c.xi[i] - a * nx, c.eta[i] - a * ny});
  }
}

// Straight arms joined by an arc of radius `radius` turning by `angle`.
// Turns beyond pi bring the outgoing arm back across the incoming one.
CurvatureProfile turn(double radius, double angle) {
  std::vector<double> s, g;
  const double arc = angle * radius;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double t = -40.0 + (arc + 80.0) * i / n;
    s.push_back(t);
    g.push_back(t >= 0.0 && t <= arc ? 1.0 / radius : 0.0);
  }
  return CurvatureProfile::tabulated(s, g);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("zero curvature reconstructs a straight segment") {
    const PlanarCurve c = reconstruct_curve(CurvatureProfile::zero(), {0.0, 10.0}, 101);
    REQUIRE(c.size() == 101);
    CHECK(c.xi.back() == Approx(10.0).epsilon(1e-14));
    CHECK(std::abs(c.eta.back()) < 1e-14);
    for (double t : c.theta) CHECK(t == 0.0);
  }

  TEST_CASE("constant curvature closes into a circle") {
    const double R = 1.0;
    const PlanarCurve c =
        reconstruct_curve(CurvatureProfile::constant(1.0 / R, {0.0, 2.0 * kPi * R}), {0.0, 2.0 * kPi * R}, 10000);
    CHECK(std::hypot(c.xi.back(), c.eta.back()) < 1e-4);
    CHECK(c.theta.back() == Approx(-2.0 * kPi).epsilon(1e-10));
  }

  TEST_CASE("gaussian total turn is sqrt(pi)") {
    const PlanarCurve c = reconstruct_curve(CurvatureProfile::gaussian(1.0, 1.0), {-6.0, 6.0}, 2001);
    CHECK(std::abs(c.theta.back() - c.theta.front()) == Approx(1.772454).epsilon(1e-6));
    CHECK(CurvatureProfile::gaussian(1.0, 1.0).total_turn() == Approx(std::sqrt(kPi)).epsilon(1e-10));
  }

  TEST_CASE("profile norms") {
    const CurvatureProfile g = CurvatureProfile::gaussian(1.0, 1.0);
    CHECK(g.l2_norm_squared() == Approx(std::sqrt(kPi / 2.0)).epsilon(1e-10));
    CHECK(g.scaled(0.5).l2_norm_squared() == Approx(0.25 * std::sqrt(kPi / 2.0)).epsilon(1e-10));
    CHECK(g.scaled(0.5).sup_norm() == Approx(0.5));
    CHECK(g(100.0) == 0.0);
    CHECK(DeformationProfile::bump(1.0, 1.0).mean() == Approx(256.0 / 315.0).epsilon(1e-10));
    CHECK(std::abs(DeformationProfile::wavelet(1.0, 3.0).mean()) < 1e-12);
  }

  TEST_CASE("harmonic profile keeps the mean curvature") {
    const double L = 6.0 * kPi;
    const CurvatureProfile g = CurvatureProfile::harmonic(1.0 / 3.0, 0.3, 2, L);
    CHECK(g.total_turn() == Approx(2.0 * kPi).epsilon(1e-8));
  }

  TEST_CASE("invalid profiles are rejected") {
    CHECK_THROWS_AS(CurvatureProfile::gaussian(1.0, 0.0), GeometryError);
    CHECK_THROWS_AS(CurvatureProfile::tabulated({0.0, 0.0}, {1.0, 1.0}), GeometryError);
    CHECK_THROWS_AS(profile_kind_from_string("spline"), ConfigError);
  }

  TEST_CASE("injectivity verdicts") {
    CHECK(check_injectivity(CurvatureProfile::zero(), 1.0) == Injectivity::admissible);
    CHECK(check_injectivity(CurvatureProfile::constant(1.0, {0.0, 1.0}), 2.0) ==
          Injectivity::necessary_violated);
    CHECK(check_injectivity(CurvatureProfile::gaussian(0.5, 1.0), 1.0) == Injectivity::admissible);
    // a ||gamma|| < 1 in both cases; only the long turn folds back on itself.
    CHECK(check_injectivity(turn(1.0, 1.8 * kPi), 0.3) == Injectivity::self_intersection);
    CHECK(check_injectivity(turn(3.0, 0.5 * kPi), 0.9) == Injectivity::admissible);
  }

  TEST_CASE("injectivity agrees with the brute-force intersection test") {
    std::vector<std::array<double, 2>> up, lo;
    int crossing = 0, clear = 0;
    for (double a : {0.3, 0.6, 0.9}) {
      for (double angle : {0.5 * kPi, kPi, 1.8 * kPi}) {
        const CurvatureProfile g = turn(1.5, angle);
        const Interval range{-10.0, angle * 1.5 + 10.0};
        boundaries(g, a, range, 4000, up, lo);
        const bool brute = polylines_intersect_bruteforce(up, lo, false);
        const Injectivity v = check_injectivity(g, a, {0, false, range});
        CHECK_MESSAGE(brute == (v == Injectivity::self_intersection), "a=" << a << " angle=" << angle);
        (brute ? crossing : clear)++;
      }
    }
    CHECK(crossing > 0);
    CHECK(clear > 0);
  }

  TEST_CASE("domain thresholds") {
    CHECK(*continuum_threshold({BentStrip{CurvatureProfile::zero(), 1.0}}) == Approx(kPi * kPi / 4.0));
    CHECK(*continuum_threshold({LShape{kPi}}) == Approx(1.0));
    CHECK(*continuum_threshold({Cross{kPi}}) == Approx(1.0));
    CHECK(*continuum_threshold({CoupledStrips{1.0, 1.0, 3.0}}) == Approx(kPi * kPi));
    CHECK(*continuum_threshold({CoupledStrips{1.0, 2.0, 3.0}}) == Approx(kPi * kPi / 4.0));
    CHECK(*continuum_threshold({DeformedStrip{kPi, DeformationProfile::bump(1.0, 1.0), 0.1}}) == Approx(1.0));
    CrossSection2D disc;
    CHECK_FALSE(continuum_threshold({disc}).has_value());
  }

  TEST_CASE("build_domain: L-shape is a truncated masked region") {
    BuildOptions o;
    o.truncation = 30.0;
    const DiscretizableDomain d = build_domain({LShape{kPi}}, o);
    REQUIRE(std::holds_alternative<MaskedRegion>(d.region));
    const MaskedRegion& m = std::get<MaskedRegion>(d.region);
    CHECK(m.inside(1.0, 20.0));
    CHECK(m.inside(20.0, 1.0));
    CHECK_FALSE(m.inside(5.0, 5.0));
    CHECK_FALSE(m.inside(-0.5, 1.0));
    CHECK(*d.threshold == Approx(1.0));
    CHECK(d.arm_x);
    CHECK(d.arm_y);
  }

  TEST_CASE("build_domain rejects inadmissible strips") {
    CHECK_THROWS_AS(build_domain({BentStrip{CurvatureProfile::constant(1.0, {0.0, 1.0}), 2.0}}), GeometryError);
    CHECK_THROWS_AS(build_domain({LShape{-1.0}}), ConfigError);
  }

  TEST_CASE("geometry kinds") {
    CHECK(geometry_kind({LShape{1.0}}) == "l_shape");
    CHECK(geometry_kind({TwistedFiber{}}) == "twisted_fiber");
  }
}

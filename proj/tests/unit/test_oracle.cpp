#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zzspec/errors.hpp"
#include "zzspec/oracle.hpp"

using namespace zzspec;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("oracle") {
  TEST_CASE("bessel zeros") {
    CHECK(bessel_zero(0.0, 1) == Approx(2.404825557696).epsilon(1e-12));
    CHECK(bessel_zero(1.0, 1) == Approx(3.831705970208).epsilon(1e-12));
    CHECK(bessel_zero(1.5, 1) == Approx(4.493409457909).epsilon(1e-12));
    CHECK(bessel_zero(0.5, 1) == Approx(kPi).epsilon(1e-12));
    CHECK(bessel_zero(0.5, 3) == Approx(3.0 * kPi).epsilon(1e-12));
    CHECK(bessel_zero(0.0, 2) == Approx(5.520078110286).epsilon(1e-12));
    CHECK(std::abs(bessel_j(0.0, bessel_zero(0.0, 3))) < 1e-12);
    CHECK_THROWS(bessel_zero(0.3, 1));
  }

  TEST_CASE("bessel functions against the standard library") {
    for (double x : {0.1, 1.0, 3.7, 9.5, 15.0}) {
      CHECK(bessel_j(0.0, x) == Approx(std::cyl_bessel_j(0.0, x)).epsilon(1e-11));
      CHECK(bessel_j(1.5, x) == Approx(std::cyl_bessel_j(1.5, x)).epsilon(1e-11));
      if (x <= 12.0) {
        CHECK(bessel_y(0, x) == Approx(std::cyl_neumann(0.0, x)).epsilon(1e-10));
        CHECK(bessel_y(2, x) == Approx(std::cyl_neumann(2.0, x)).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("rectangle spectrum") {
    const std::vector<double> v = reference_spectrum({ReferenceKind::rectangle, kPi, kPi, 4});
    REQUIRE(v.size() == 4);
    CHECK(v[0] == Approx(2.0));
    CHECK(v[1] == Approx(5.0));
    CHECK(v[2] == Approx(5.0));
    CHECK(v[3] == Approx(8.0));
  }

  TEST_CASE("interval spectrum") {
    const std::vector<double> v = reference_spectrum({ReferenceKind::interval, 2.0, 0.0, 3});
    CHECK(v[0] == Approx(kPi * kPi / 4.0));
    CHECK(v[1] == Approx(kPi * kPi));
    CHECK(v[2] == Approx(9.0 * kPi * kPi / 4.0));
  }

  TEST_CASE("disc spectrum") {
    const std::vector<double> v = reference_spectrum({ReferenceKind::disc, 1.0, 0.0, 3});
    CHECK(v[0] == Approx(5.783185962947).epsilon(1e-12));
    // j_{1,1}^2 twice (cos and sin modes).
    CHECK(v[1] == Approx(14.681970642124).epsilon(1e-11));
    CHECK(v[2] == Approx(v[1]).epsilon(1e-14));
    CHECK(reference_spectrum({ReferenceKind::disc, 2.0, 0.0, 1})[0] == Approx(v[0] / 4.0));
  }

  TEST_CASE("annulus spectrum is a root of the cross product") {
    const double r_in = 2.0, r_out = 4.0;
    const double lam = reference_spectrum({ReferenceKind::annulus, r_in, r_out, 1}).front();
    CHECK(std::abs(annulus_cross_product(0, std::sqrt(lam), r_in, r_out)) < 1e-10);
    // Thin annulus: close to the strip value (pi / 2)^2 with a small correction.
    CHECK(lam == Approx(kPi * kPi / 4.0).epsilon(0.02));
    CHECK_THROWS_AS(reference_spectrum({ReferenceKind::annulus, 3.0, 2.0, 1}), ConfigError);
  }

  TEST_CASE("effective 1d gaps") {
    // Gaussian of amplitude 0.1 and width 1: ||gamma||^2 = 0.01 sqrt(pi/2).
    const CurvatureProfile g = CurvatureProfile::gaussian(0.1, 1.0);
    CHECK(effective_1d_gap(g, 1.0) == Approx(1.56664e-3).epsilon(1e-5));
    CHECK(effective_1d_gap(g, 0.0) == 0.0);
    // Deformation with <f> = 0.1, d = pi, beta = 1: pi^4 0.01 / pi^6.
    const DeformationProfile f = DeformationProfile::tabulated({-1.0, 0.0, 1.0}, {0.0, 0.1, 0.0});
    CHECK(f.mean() == Approx(0.1));
    CHECK(effective_1d_gap(f, kPi, 1.0) == Approx(1.01321e-3).epsilon(1e-5));
    CHECK(effective_1d_gap(f, kPi, 0.0) == 0.0);
  }
}

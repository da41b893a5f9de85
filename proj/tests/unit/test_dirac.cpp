#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zzspec/dirac.hpp"
#include "zzspec/errors.hpp"
#include "zzspec/oracle.hpp"

using namespace zzspec;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

EigResult eigs(std::vector<double> values) {
  EigResult r;
  r.residuals.assign(values.size(), 1e-10);
  r.eigenvalues = std::move(values);
  return r;
}

}  // namespace

TEST_SUITE("dirac") {
  TEST_CASE("energy map") {
    CHECK(dirac_energy(1.0, {0.0, 1.0, 1.0}) == Approx(1.0));
    CHECK(dirac_energy(3.0, {1.0, 1.0, 1.0}) == Approx(2.0));
    const DiracSpectrum d = map_spectrum(eigs({1.0}), std::nullopt, {0.0, 1.0, 1.0}, 2);
    REQUIRE(d.discrete.size() == 1);
    CHECK(d.discrete[0].plus == Approx(1.0));
    CHECK(d.discrete[0].minus == -d.discrete[0].plus);
    const DiracSpectrum m = map_spectrum(eigs({3.0}), std::nullopt, {1.0, 1.0, 1.0}, 2);
    CHECK(m.discrete[0].plus == Approx(2.0));
    CHECK(m.discrete[0].minus == Approx(-2.0));
  }

  TEST_CASE("multiplicity r k") {
    const DiracSpectrum d3 = map_spectrum(eigs({1.0, 2.0}), std::nullopt, {}, 3);
    CHECK(d3.discrete[0].multiplicity == 2);
    CHECK(d3.discrete[0].laplace_multiplicity == 1);
    const DiracSpectrum d2 = map_spectrum(eigs({1.0, 2.0}), std::nullopt, {}, 2);
    CHECK(d2.discrete[0].multiplicity == 1);
  }

  TEST_CASE("clusters merge into one multiple eigenvalue") {
    const DiracSpectrum d = map_spectrum(eigs({5.0, 5.0 * (1.0 + 1e-8), 8.0}), std::nullopt, {}, 3);
    REQUIRE(d.discrete.size() == 2);
    CHECK(d.discrete[0].laplace_multiplicity == 2);
    CHECK(d.discrete[0].multiplicity == 4);
    const DiracSpectrum apart = map_spectrum(eigs({5.0, 5.0 * (1.0 + 1e-4)}), std::nullopt, {}, 2);
    CHECK(apart.discrete.size() == 2);
  }

  TEST_CASE("threshold buckets") {
    const double thr = 1.0;
    const DiracSpectrum d = map_spectrum(eigs({0.5, 1.0 - 1e-8, 1.5}), thr, {}, 2);
    CHECK(d.discrete.size() == 1);
    CHECK(d.near_threshold.size() == 1);
    CHECK(d.excluded.size() == 1);
    for (const DiracPair& p : d.discrete) CHECK(p.plus < *d.essential.threshold);
  }

  TEST_CASE("non-positive eigenvalues are rejected") {
    CHECK_THROWS_AS(map_spectrum(eigs({0.0}), std::nullopt, {}, 2), NumericalError);
    CHECK_THROWS_AS(map_spectrum(eigs({-1.0}), std::nullopt, {}, 2), NumericalError);
    CHECK_THROWS_AS(map_spectrum(eigs({1.0}), std::nullopt, {}, 4), ConfigError);
  }

  TEST_CASE("unit validation") {
    CHECK_THROWS_AS((UnitSystem{-1.0, 1.0, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((UnitSystem{0.0, 0.0, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((UnitSystem{0.0, 1.0, 0.0}.validate()), ConfigError);
  }

  TEST_CASE("monotone in lambda and m, hbar scaling") {
    const UnitSystem u{1.0, 1.0, 1.0};
    CHECK(dirac_energy(2.0, u) > dirac_energy(1.0, u));
    CHECK(dirac_energy(1.0, {2.0, 1.0, 1.0}) > dirac_energy(1.0, u));
    for (double m : {0.0, 1.0, 3.0})
      CHECK(dirac_energy(1.7, {m, 1.3, 2.0}) == Approx(2.0 * dirac_energy(1.7, {m / 2.0, 1.3, 1.0})));
  }

  TEST_CASE("essential bands") {
    const EssentialSpectrum strip =
        essential_bands({DeformedStrip{kPi, DeformationProfile::bump(1.0, 1.0), 0.1}}, {0.0, 1.0, 1.0});
    CHECK(*strip.threshold == Approx(1.0));
    REQUIRE(strip.bands.size() == 2);
    CHECK(strip.bands[0].lo_infinite);
    CHECK(strip.bands[0].hi == Approx(-1.0));
    CHECK(strip.bands[1].lo == Approx(1.0));
    CHECK(strip.bands[1].hi_infinite);

    const EssentialSpectrum coupled = essential_bands({CoupledStrips{1.0, 2.0, 1.0}}, {});
    CHECK(*coupled.laplace_threshold == Approx(kPi * kPi / 4.0));

    const EssentialSpectrum massive = essential_bands({LShape{kPi}}, {2.0, 1.0, 1.0});
    CHECK(massive.mass_point == 2.0);
    CHECK(massive.mass_point_note.find("not an eigenvalue") != std::string::npos);
    CHECK(*massive.threshold >= massive.mass_point);

    CHECK_THROWS_AS(essential_bands({TwistedFiber{}}, {}), ConfigError);
    CHECK(*essential_bands({TwistedFiber{}}, {}, 5.0).threshold == Approx(std::sqrt(5.0)));
  }

  TEST_CASE("ppw bounds") {
    CHECK(ppw_constant_2d() == Approx(0.39390).epsilon(1e-4));
    CHECK(ppw_bound(2, 0.5, 1, {0.0, 1.0, 1.0}) == Approx(1.9719).epsilon(1e-4));
    const double mu1 = reference_spectrum({ReferenceKind::disc, 1.0, 0.0, 1}).front();
    CHECK(ppw_bound(3, mu1, 1, {0.0, 1.0, 1.0}) == Approx(1.6812).epsilon(1e-4));
    const double b1 = ppw_bound(2, 0.5, 1, {}), b2 = ppw_bound(2, 0.5, 2, {});
    CHECK(b2 * b2 == Approx(b1 * b1 / 3.0));
    CHECK_THROWS_AS(ppw_bound(2, 0.5, 0, {}), ConfigError);
  }

  TEST_CASE("fichera essential spectrum") {
    CHECK(*fichera_essential(0.9291, {0.0, 1.0, 1.0}).threshold == Approx(0.9639).epsilon(1e-4));
    CHECK(*fichera_essential(1.0, {0.0, 1.0, 1.0}).threshold == Approx(1.0));
    CHECK(*fichera_essential(0.93, {2.0, 1.0, 1.0}).threshold == Approx(2.2204).epsilon(1e-4));
  }

  TEST_CASE("out-of-scope geometries") {
    CHECK_NOTHROW(require_supported_geometry("bent_strip"));
    CHECK_THROWS_AS(require_supported_geometry("curved_layer"), OutOfScopeError);
    CHECK_THROWS_AS(require_supported_geometry("fichera_layer"), OutOfScopeError);
    CHECK_THROWS_AS(require_supported_geometry("moebius"), ConfigError);
    try {
      require_supported_geometry("moebius");
    } catch (const OutOfScopeError&) {
      FAIL("unknown kinds are config errors, not out of scope");
    } catch (const ConfigError&) {
    }
  }
}

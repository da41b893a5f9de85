#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zzspec/asymptotics.hpp"
#include "zzspec/errors.hpp"

using namespace zzspec;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// (1 - r^2)^4 on the unit disc: twice differentiable, compact support.
LayerProfile bump_layer() {
  LayerProfile p;
  p.f = [](double x, double y) {
    const double r2 = x * x + y * y;
    return r2 < 1.0 ? std::pow(1.0 - r2, 4) : 0.0;
  };
  p.half_extent = 1.0;
  return p;
}

}  // namespace

TEST_SUITE("asymptotics") {
  TEST_CASE("transverse overlaps") {
    CHECK(std::abs(transverse_overlap(2, 1.0) - -0.360250) < 5e-6);
    CHECK(transverse_overlap(2, 1.0) == Approx(-32.0 / (9.0 * kPi * kPi)).epsilon(1e-12));
    CHECK(transverse_overlap(3, 1.0) == 0.0);
    CHECK(transverse_overlap(5, 1.0) == 0.0);
    CHECK(transverse_overlap(2, 2.0) == Approx(2.0 * transverse_overlap(2, 1.0)));
  }

  TEST_CASE("bent strip series") {
    const CurvatureProfile g = CurvatureProfile::gaussian(1.0, 1.0);
    const AsymptoticPrediction p = bent_strip_series(g, 1.0, 0.1);
    const double leading = p.ingredient("leading");
    CHECK(leading == Approx(0.01 * std::sqrt(kPi / 2.0) / 8.0).epsilon(1e-10));
    CHECK(p.ingredient("correction") >= 0.0);
    CHECK(p.ingredient("correction") <= leading);
    CHECK(p.value <= leading);
    CHECK(p.value > 0.0);
    for (std::size_t i = 0; i < p.modes.size(); ++i) {
      if (p.modes[i] % 2 == 1) CHECK(p.terms[i] == 0.0);
      CHECK(p.terms[i] >= 0.0);
    }
    CHECK(bent_strip_series(g, 1.0, 0.0).value == 0.0);
    CHECK_THROWS_AS(bent_strip_series(g, 1.0, 0.1, 1), ConfigError);
  }

  TEST_CASE("bent strip series: translation, sign and mode cutoff") {
    const AsymptoticPrediction p = bent_strip_series(CurvatureProfile::gaussian(1.0, 1.0), 1.0, 0.1);
    const AsymptoticPrediction shifted = bent_strip_series(CurvatureProfile::gaussian(1.0, 1.0, 3.0), 1.0, 0.1);
    const AsymptoticPrediction flipped = bent_strip_series(CurvatureProfile::gaussian(-1.0, 1.0), 1.0, 0.1);
    CHECK(shifted.value == Approx(p.value).epsilon(1e-9));
    CHECK(flipped.value == Approx(p.value).epsilon(1e-12));
    double prev = bent_strip_series(CurvatureProfile::gaussian(1.0, 1.0), 1.0, 0.1, 2).value;
    for (int n : {4, 8, 20}) {
      const double v = bent_strip_series(CurvatureProfile::gaussian(1.0, 1.0), 1.0, 0.1, n).value;
      CHECK(v <= prev);
      prev = v;
    }
  }

  TEST_CASE("bent tube series") {
    const std::vector<SectionMode> modes = disc_modes(1.0, 6);
    REQUIRE(modes.size() == 6);
    CHECK(modes[0].mu == Approx(5.783185962947).epsilon(1e-10));
    const CurvatureProfile g = CurvatureProfile::gaussian(1.0, 1.0);
    const PolarQuadrature quad;
    const AsymptoticPrediction p = bent_tube_series(g, CurvatureProfile::zero(), modes, quad, 0.1);
    CHECK(p.ingredient("leading") == Approx(0.01 * std::sqrt(kPi / 2.0) / 8.0).epsilon(1e-10));
    CHECK(std::abs(p.ingredient("correction")) < p.ingredient("leading"));
    // Radial modes drop out without torsion.
    for (std::size_t i = 0; i < p.modes.size(); ++i) {
      const SectionMode& m = modes[static_cast<std::size_t>(p.modes[i] - 1)];
      if (m.label.rfind("J0 ", 0) == 0) CHECK(std::abs(p.terms[i]) < 1e-12);
    }
    CHECK(bent_tube_series(g, CurvatureProfile::zero(), modes, quad, 0.0).value == 0.0);
    std::vector<SectionMode> bad = modes;
    std::swap(bad[0], bad[1]);
    CHECK_THROWS_AS(bent_tube_series(g, CurvatureProfile::zero(), bad, quad, 0.1), ConfigError);
  }

  TEST_CASE("deformed strip predictions") {
    CHECK(critical_constant() == Approx(0.7206090).epsilon(1e-7));
    const DeformationProfile bump = DeformationProfile::bump(1.0, 1.0);
    const AsymptoticPrediction p = deformed_strip_prediction(bump, kPi, 0.1);
    const double mean = bump.mean();
    CHECK(p.ingredient("oracle_gap") == Approx(0.01 * std::pow(kPi, 4) * mean * mean / std::pow(kPi, 6)));
    CHECK(p.ingredient("literal_gap") == Approx(0.01 * std::pow(kPi, 4) / (kPi * kPi) * mean));
    CHECK(p.has_flag("literal_gap_dimensionally_suspect"));
    const AsymptoticPrediction zero = deformed_strip_prediction(bump, kPi, 0.0);
    CHECK(zero.ingredient("oracle_gap") == 0.0);
    CHECK(zero.ingredient("literal_gap") == 0.0);

    const AsymptoticPrediction neg = deformed_strip_prediction(DeformationProfile::bump(-1.0, 1.0), kPi, 0.1);
    CHECK(neg.verdict.find("empty") != std::string::npos);

    const AsymptoticPrediction crit = deformed_strip_prediction(DeformationProfile::wavelet(1.0, 3.0), 1.0, 0.1);
    CHECK(crit.has_flag("critical"));
    CHECK(crit.ingredient("expected_exponent") == 4.0);
    CHECK(crit.ingredient("derivative_ratio") < crit.ingredient("critical_bound"));
    CHECK(crit.verdict.find("expected") != std::string::npos);
    CHECK_THROWS_AS(p.ingredient("nonexistent"), std::out_of_range);
  }

  TEST_CASE("bulged layer") {
    const AsymptoticPrediction p = bulged_layer_weak_coupling(1.0, kPi, 0.1, {});
    CHECK(p.ingredient("w") == Approx(-0.031831).epsilon(1e-5));
    CHECK(std::log(p.ingredient("gap_factor")) == Approx(-62.83).epsilon(1e-4));
    CHECK_THROWS_AS(bulged_layer_weak_coupling(0.0, kPi, 0.1, {}), ConfigError);
  }

  TEST_CASE("curved layer") {
    const AsymptoticPrediction p = layer_weak_coupling(bump_layer(), 1.0, 0.2, {});
    const double w = p.ingredient("w");
    CHECK(w < 0.0);
    const double gap = p.ingredient("gap_factor");
    CHECK(gap > 0.0);
    CHECK(gap < 1.0);
    CHECK(p.has_flag("gap_length_convention"));
    for (double t : p.terms) CHECK(t <= 0.0);
    const AsymptoticPrediction q = layer_weak_coupling(bump_layer(), 1.0, 0.4, {});
    CHECK(q.ingredient("w") == Approx(4.0 * w).epsilon(1e-10));

    LayerProfile flat;
    flat.f = [](double, double) { return 0.0; };
    const AsymptoticPrediction z = layer_weak_coupling(flat, 1.0, 0.2, {});
    CHECK(z.ingredient("w") == 0.0);
    CHECK(z.has_flag("degenerate"));
  }

  TEST_CASE("window counts") {
    const WindowCount w = window_count(1.0, 1.0, 3.0);
    CHECK(w.floor_term == 2);
    CHECK(w.per_sign_lo == 2);
    CHECK(w.per_sign_hi == 3);
    CHECK(w.total_lo == 4);
    CHECK(w.total_hi == 6);
    const WindowCount tiny = window_count(1.0, 1.0, 1e-6);
    CHECK(tiny.per_sign_lo == 1);
    CHECK(tiny.per_sign_hi == 2);
    const WindowCount lopsided = window_count(1.0, 1e-6, 3.0);
    CHECK(lopsided.per_sign_lo == 1);
    CHECK(lopsided.per_sign_hi == 2);
    int prev = 0;
    for (double l = 0.1; l < 20.0; l += 0.1) {
      const int lo = window_count(1.0, 0.7, l).per_sign_lo;
      CHECK(lo >= prev);
      prev = lo;
    }
    CHECK_THROWS_AS(window_count(1.0, 1.0, 0.0), ConfigError);
  }

  TEST_CASE("power-law fits") {
    std::vector<double> x, exact, perturbed;
    for (int i = 0; i < 6; ++i) {
      const double v = 0.05 + 0.03 * i;
      x.push_back(v);
      exact.push_back(3.0 * std::pow(v, 4));
      perturbed.push_back(std::pow(v, 4) * (1.0 + v));
    }
    const PowerLawFit e = power_law_fit(x, exact, 4.0);
    CHECK(std::abs(e.exponent - 4.0) < 1e-10);
    CHECK(e.coefficient == Approx(3.0).epsilon(1e-9));
    const PowerLawFit p = power_law_fit(x, perturbed, 4.0);
    CHECK(p.exponent > 4.0);
    CHECK(p.exponent < 4.3);
    CHECK_THROWS_AS(power_law_fit({0.1, 0.2}, {1e-4, 2e-3}, 4.0), ConfigError);

    std::vector<double> noisy = exact;
    noisy[2] = -1e-9;
    const PowerLawFit c = power_law_fit(x, noisy, 4.0);
    REQUIRE(c.excluded.size() == 1);
    CHECK(c.excluded.front() == 2);
    CHECK(c.used.size() == 5);
  }

  TEST_CASE("linear fit and t quantile") {
    const LinearFit f = linear_fit({1.0, 2.0, 3.0, 4.0}, {3.0, 5.0, 7.0, 9.0});
    CHECK(f.slope == Approx(2.0));
    CHECK(f.intercept == Approx(1.0));
    CHECK(f.slope_stderr < 1e-12);
    CHECK(student_t_quantile(0.95, 3) == Approx(3.182446).epsilon(1e-6));
    CHECK(student_t_quantile(0.95, 1000) == Approx(1.962).epsilon(1e-3));
  }
}

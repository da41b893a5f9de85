#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zzspec/errors.hpp"
#include "zzspec/pipeline.hpp"
#include "zzspec/studies.hpp"
#include "zzspec/validation.hpp"

using namespace zzspec;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("pipeline") {
  TEST_CASE("straight strip has no discrete spectrum") {
    SolverSettings s;
    s.grid.h = 0.125;
    s.truncation = 10.0;
    s.refine = 1;
    const SolveReport r = solve_domain({BentStrip{CurvatureProfile::zero(), 1.0}}, s);
    CHECK(r.dirac.discrete.empty());
    CHECK(*r.levels.back().count_below_threshold == 0);
    CHECK(*r.dirac.essential.threshold == Approx(kPi / 2.0));
    CHECK(r.levels.size() == 2);
  }

  TEST_CASE("bent strip: one level per refinement, extrapolated bound state") {
    SolverSettings s;
    s.grid.h = 0.25;
    s.truncation = 60.0;
    s.refine = 2;
    s.gap_guess = 0.01;
    const SolveReport r = solve_domain({BentStrip{CurvatureProfile::gaussian(0.8, 1.0), 1.0}}, s);
    REQUIRE(r.levels.size() == 3);
    CHECK(r.levels[1].eig.h == Approx(r.levels[0].eig.h / 2.0));
    REQUIRE(r.best.extrapolated);
    CHECK(r.gap_extrapolation);
    REQUIRE_FALSE(r.dirac.discrete.empty());
    CHECK(r.dirac.discrete.front().laplace < kPi * kPi / 4.0);
    CHECK(*r.levels.back().count_below_threshold >= 1);
    const std::vector<double> v = reported_eigenvalues(r);
    CHECK(v.front() == r.best.extrapolated->values.front());
  }

  TEST_CASE("disc: bounded domain has no bands") {
    SolverSettings s;
    s.grid.h = 1.0 / 16;
    s.refine = 1;
    s.dim = 3;
    CrossSection2D disc;
    const SolveReport r = solve_domain({disc}, s);
    CHECK(r.dirac.essential.bands.empty());
    CHECK(r.dirac.discrete.front().multiplicity == 2);
    CHECK(reported_eigenvalues(r).front() == Approx(5.783186).epsilon(1e-3));
  }

  TEST_CASE("solver settings are validated") {
    SolverSettings s;
    s.grid.h = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.grid.h = 0.1;
    s.k = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.k = 1;
    s.dim = 4;
    CHECK_THROWS_AS(s.validate(), ConfigError);
  }

  TEST_CASE("with_parameter") {
    const DomainSpec strips{CoupledStrips{1.0, 1.0, 1.0}};
    CHECK(std::get<CoupledStrips>(with_parameter(strips, "window", 2.5).geometry).window == 2.5);
    const DomainSpec bent{BentStrip{CurvatureProfile::gaussian(1.0, 1.0), 1.0}};
    CHECK(std::get<BentStrip>(with_parameter(bent, "beta", 0.3).geometry).curvature.scale() == Approx(0.3));
    const DomainSpec deformed{DeformedStrip{1.0, DeformationProfile::bump(1.0, 1.0), 0.0}};
    CHECK(std::get<DeformedStrip>(with_parameter(deformed, "beta", 0.2).geometry).beta == 0.2);
    CHECK_THROWS_AS(with_parameter(strips, "beta", 0.2), ConfigError);
    CHECK_THROWS_AS(with_parameter(bent, "window", 0.2), ConfigError);
  }

  TEST_CASE("sweep settings are validated") {
    SweepSettings sw;
    sw.parameter = "window";
    sw.values = {0.1, 0.2, 0.3};
    CHECK_THROWS_AS(sw.validate(), ConfigError);
    sw.values = {0.1, 0.2, 0.4, 0.3};
    CHECK_THROWS_AS(sw.validate(), ConfigError);
    sw.values = {0.1, 0.2, 0.3, 0.4};
    CHECK_NOTHROW(sw.validate());
    sw.parameter = "length";
    CHECK_THROWS_AS(sw.validate(), ConfigError);
  }

  TEST_CASE("twisted fibre: twisting raises the bottom of an ellipse") {
    CrossSection2D ellipse;
    ellipse.shape = SectionShape::ellipse;
    ellipse.p0 = 1.0;
    ellipse.p1 = 0.5;
    SolverSettings s;
    s.grid.h = 1.0 / 16;
    s.refine = 1;
    const FiberStudy f = twisted_fiber_study(ellipse, {0.0, 1.0}, s);
    REQUIRE(f.cases.size() == 2);
    CHECK(f.cases[1].value > f.cases[0].value);
    CHECK(f.cases[0].error_estimate > 0.0);
    CrossSection2D disc;
    const FiberStudy d = twisted_fiber_study(disc, {0.0, 1.0}, s);
    CHECK(d.cases[1].value == Approx(d.cases[0].value).epsilon(1e-8));
  }

  TEST_CASE("validation suite passes and the negative control fails") {
    const ValidationReport ok = run_validation();
    for (const ValidationCheck& c : ok.checks) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
    CHECK(ok.passed());
    const ValidationReport bad = run_validation({true});
    CHECK_FALSE(bad.passed());
    CHECK(bad.failures() == 1);
  }
}

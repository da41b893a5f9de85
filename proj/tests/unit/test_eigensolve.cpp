#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zzspec/asymptotics.hpp"
#include "zzspec/discretize.hpp"
#include "zzspec/eigensolve.hpp"
#include "zzspec/errors.hpp"
#include "zzspec/pipeline.hpp"

using namespace zzspec;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

MaskedRegion rectangle(double a, double b) {
  MaskedRegion r;
  r.x = {0.0, a};
  r.y = {0.0, b};
  r.boxes = {Box{{0.0, a}, {0.0, b}}};
  return r;
}

}  // namespace

TEST_SUITE("eigensolve") {
  TEST_CASE("lanczos agrees with the dense solver") {
    const GridOperator op = assemble_cartesian(rectangle(2.0, 1.0), 1.0 / 8);
    SolveOptions o;
    o.k = 5;
    const EigResult sparse = smallest_eigs(op, o);
    const EigResult dense = dense_smallest_eigs(op, 5);
    REQUIRE(sparse.eigenvalues.size() == 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(sparse.eigenvalues[i] == Approx(dense.eigenvalues[i]).epsilon(1e-10));
      CHECK(sparse.residuals[i] <= 1e-8);
    }
  }

  TEST_CASE("inertia counts on the square of side pi") {
    // Eigenvalues near 2, 5, 5, 8.
    const GridOperator op = assemble_cartesian(rectangle(kPi, kPi), kPi / 32);
    CHECK(count_below(op, 6.0) == 3);
    CHECK(count_below(op, 1.0) == 0);
    CHECK(count_below(op, 3.0) == 1);
  }

  TEST_CASE("coupled strips: counted states match the window estimate") {
    SolverSettings s;
    s.grid.h = 1.0 / 16;
    s.truncation = 20.0;
    s.k = 3;
    const SolveReport r = solve_domain({CoupledStrips{1.0, 1.0, 3.0}}, s);
    const WindowCount w = window_count(1.0, 1.0, 3.0);
    REQUIRE(r.levels.back().count_below_threshold);
    const int n = *r.levels.back().count_below_threshold;
    CHECK(n >= w.per_sign_lo);
    CHECK(n <= w.per_sign_hi);
    CHECK(w.per_sign_lo == 2);
    CHECK(w.per_sign_hi == 3);
  }

  TEST_CASE("richardson: exact on a pure h^2 error") {
    std::vector<std::vector<double>> v;
    std::vector<double> h;
    for (double hh : {0.4, 0.2, 0.1}) {
      v.push_back({2.0 + 0.7 * hh * hh, 5.0 - 0.3 * hh * hh});
      h.push_back(hh);
    }
    const Extrapolation e = richardson(v, h);
    CHECK(e.values[0] == Approx(2.0).epsilon(1e-12));
    CHECK(e.values[1] == Approx(5.0).epsilon(1e-12));
    CHECK(e.observed_order[0] == Approx(2.0).epsilon(1e-9));
    CHECK_FALSE(e.flagged[0]);
  }

  TEST_CASE("richardson: two grids use the assumed order") {
    const Extrapolation e = richardson({{2.0 + 0.04}, {2.0 + 0.01}}, {0.2, 0.1});
    CHECK(e.values[0] == Approx(2.0).epsilon(1e-12));
    CHECK(e.observed_order[0] == 2.0);
  }

  TEST_CASE("richardson: identical inputs come back unchanged") {
    const Extrapolation three = richardson({{3.0, 4.0}, {3.0, 4.0}, {3.0, 4.0}}, {0.4, 0.2, 0.1});
    CHECK(three.values == std::vector<double>{3.0, 4.0});
    const Extrapolation two = richardson({{3.0}, {3.0}}, {0.2, 0.1});
    CHECK(two.values[0] == 3.0);
  }

  TEST_CASE("richardson: a non-monotone triple is flagged") {
    const Extrapolation e = richardson({{3.0}, {3.1}, {3.05}}, {0.4, 0.2, 0.1});
    CHECK(e.flagged[0]);
    CHECK(e.values[0] == 3.05);
  }

  TEST_CASE("richardson: observed order on the square") {
    std::vector<std::vector<double>> v;
    std::vector<double> h;
    for (int n : {16, 32, 64}) {
      v.push_back(smallest_eigs(assemble_cartesian(rectangle(kPi, kPi), kPi / n)).eigenvalues);
      h.push_back(kPi / n);
    }
    const Extrapolation e = richardson(v, h);
    CHECK(e.observed_order[0] == Approx(2.0).epsilon(0.05));
    CHECK(e.values[0] == Approx(2.0).epsilon(1e-5));
  }

  TEST_CASE("the seed makes runs reproducible") {
    const GridOperator op = assemble_cartesian(rectangle(2.0, 1.0), 1.0 / 16);
    SolveOptions o;
    o.k = 3;
    const EigResult a = smallest_eigs(op, o);
    const EigResult b = smallest_eigs(op, o);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.residuals == b.residuals);
    CHECK(a.iterations == b.iterations);
    CHECK(a.seed == kDefaultSeed);
    o.seed = 7;
    const EigResult c = smallest_eigs(op, o);
    for (int i = 0; i < 3; ++i) CHECK(c.eigenvalues[i] == Approx(a.eigenvalues[i]).epsilon(1e-10));
  }

  TEST_CASE("a shift above the spectrum is rejected") {
    const GridOperator op = assemble_cartesian(rectangle(1.0, 1.0), 1.0 / 8);
    SolveOptions o;
    o.shift = 100.0;
    CHECK_THROWS_AS(smallest_eigs(op, o), SingularShiftError);
    CHECK_THROWS_AS(smallest_eigs(op, o), NumericalError);
  }

  TEST_CASE("L-shape lowest eigenvalue at h = pi/64") {
    SolverSettings s;
    s.grid.h = kPi / 64;
    s.truncation = 30.0;
    s.gap_guess = 0.1;
    const SolveReport r = solve_domain({LShape{kPi}}, s);
    const double lam = r.best.eigenvalues.front();
    CHECK(lam > 0.91);
    CHECK(lam < 0.95);
    CHECK(*r.levels.back().count_below_threshold == 1);
  }
}

TEST_SUITE("convergence") {
  TEST_CASE("L-shape observed order on pi/64, pi/128, pi/256") {
    SolverSettings s;
    s.grid.h = kPi / 64;
    s.refine = 2;
    s.truncation = 30.0;
    s.gap_guess = 0.1;
    s.count = false;
    const SolveReport r = solve_domain({LShape{kPi}}, s);
    REQUIRE(r.best.extrapolated);
    const double p = r.best.extrapolated->observed_order.front();
    MESSAGE("observed order " << p << ", extrapolated " << r.best.extrapolated->values.front());
    CHECK(p > 1.2);
    CHECK(p < 2.0);
  }
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <map>
#include <queue>

#include "zzspec/assemble.hpp"
#include "zzspec/discretize.hpp"
#include "zzspec/eigensolve.hpp"
#include "zzspec/errors.hpp"

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

GridOperator build(const DomainSpec& spec, double h, double truncation, int refine = 0) {
  BuildOptions b;
  b.truncation = truncation;
  GridSettings g;
  g.h = h;
  g.refine = refine;
  return discretize(build_domain(spec, b), g);
}

double relative_defect(const GridOperator& op) {
  return symmetry_defect(op.A) / op.A.coeffs().cwiseAbs().maxCoeff();
}

int components(const SparseMatrix& A) {
  const Eigen::Index n = A.rows();
  std::vector<int> label(n, -1);
  int count = 0;
  for (Eigen::Index start = 0; start < n; ++start) {
    if (label[start] >= 0) continue;
    std::queue<Eigen::Index> q;
    q.push(start);
    label[start] = count;
    while (!q.empty()) {
      const Eigen::Index c = q.front();
      q.pop();
      for (SparseMatrix::InnerIterator it(A, c); it; ++it) {
        if (it.value() == 0.0 || label[it.row()] >= 0) continue;
        label[it.row()] = count;
        q.push(it.row());
      }
    }
    ++count;
  }
  return count;
}

}  // namespace

TEST_SUITE("assemble") {
  TEST_CASE("every scheme is symmetric and the negative control is caught") {
    GridOperator cart = assemble_cartesian(rectangle(2.0, 1.0), 1.0 / 8);
    CHECK(relative_defect(cart) <= 1e-12);
    CHECK(positive_semidefinite(cart));
    perturb_upper_entry(cart.A, 1e-3);
    CHECK(relative_defect(cart) > 1e-12);

    const GridOperator bent = build({BentStrip{CurvatureProfile::gaussian(0.5, 1.0), 1.0}}, 0.25, 3.0);
    CHECK(relative_defect(bent) <= 1e-12);
    const GridOperator mapped = build({DeformedStrip{1.0, DeformationProfile::bump(1.0, 1.0), 0.2}}, 0.25, 3.0);
    CHECK(relative_defect(mapped) <= 1e-12);
    const GridOperator polar = assemble_polar_disc(PolarDisc{1.0}, 8, 32);
    CHECK(relative_defect(polar) <= 1e-12);
    CHECK((polar.B.array() > 0.0).all());
  }

  TEST_CASE("bent strip commutes with the reflection s -> -s") {
    const GridOperator op = build({BentStrip{CurvatureProfile::gaussian(0.5, 1.0), 1.0}}, 0.125, 4.0);
    const Axis& s = op.grid.axis0;
    const Axis& u = op.grid.axis1;
    REQUIRE(s.front() == Approx(-s.back()));
    // Map each unknown to its mirror image.
    std::map<std::pair<int, int>, Eigen::Index> index;
    for (Eigen::Index k = 0; k < op.size(); ++k) index[{op.grid.node_i[k], op.grid.node_j[k]}] = k;
    const int ns = static_cast<int>(s.size()) - 1;
    std::vector<Eigen::Index> mirror(op.size());
    for (Eigen::Index k = 0; k < op.size(); ++k) {
      const auto it = index.find({ns - op.grid.node_i[k], op.grid.node_j[k]});
      REQUIRE(it != index.end());
      mirror[k] = it->second;
    }
    CHECK(u.size() > 2);
    const Eigen::MatrixXd A = Eigen::MatrixXd(op.A);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < op.size(); ++i) {
      worst = std::max(worst, std::abs(op.B[i] - op.B[mirror[i]]));
      for (Eigen::Index j = 0; j < op.size(); ++j)
        worst = std::max(worst, std::abs(A(i, j) - A(mirror[i], mirror[j])));
    }
    CHECK(worst <= 1e-12 * A.cwiseAbs().maxCoeff());
  }

  TEST_CASE("square of side pi") {
    MaskedRegion sq = rectangle(kPi, kPi);
    const EigResult r = smallest_eigs(assemble_cartesian(sq, kPi / 64));
    CHECK(r.eigenvalues.front() == Approx(2.0).epsilon(3e-3));
  }

  TEST_CASE("coupled strips decouple without a window") {
    const GridOperator closed = build({CoupledStrips{1.0, 1.0, 0.0}}, 0.25, 4.0);
    CHECK(components(closed.A) == 2);
    const GridOperator open = build({CoupledStrips{1.0, 1.0, 2.0}}, 0.25, 4.0);
    CHECK(components(open.A) == 1);
  }

  TEST_CASE("twist zero leaves the cross-section operator unchanged") {
    CrossSection2D ellipse;
    ellipse.shape = SectionShape::ellipse;
    ellipse.p0 = 1.0;
    ellipse.p1 = 0.5;
    GridSettings g;
    g.h = 0.125;
    const GridOperator base = discretize(build_domain({TwistedFiber{ellipse, 0.0}}), g);
    const GridOperator again = assemble_twist_fiber(base, 0.0);
    CHECK(Eigen::MatrixXd(base.A - again.A).cwiseAbs().maxCoeff() == 0.0);
    const GridOperator twisted = assemble_twist_fiber(base, 1.0);
    CHECK(Eigen::MatrixXd(twisted.A - base.A).cwiseAbs().maxCoeff() > 0.0);
    CHECK(relative_defect(twisted) <= 1e-12);
  }

  TEST_CASE("bent strip has a bound state below the threshold") {
    const double thr = kPi * kPi / 4.0;
    const GridOperator op = build({BentStrip{CurvatureProfile::gaussian(0.5, 1.0), 1.0}}, 1.0 / 32, 40.0);
    REQUIRE(op.threshold);
    CHECK(*op.threshold == Approx(thr));
    const EigResult r = smallest_eigs_below(op, *op.discrete_threshold, 1e-3);
    CHECK(r.eigenvalues.front() < thr);
    CHECK(r.eigenvalues.front() < *op.discrete_threshold);
  }

  TEST_CASE("sparse and dense solvers agree on a coarse bent strip") {
    const GridOperator op = build({BentStrip{CurvatureProfile::gaussian(0.5, 1.0), 1.0}}, 0.25, 6.0);
    const EigResult dense = dense_smallest_eigs(op, 3);
    SolveOptions o;
    o.k = 3;
    const EigResult sparse = smallest_eigs(op, o);
    for (int i = 0; i < 3; ++i) CHECK(sparse.eigenvalues[i] == Approx(dense.eigenvalues[i]).epsilon(1e-9));
  }

  TEST_CASE("straight strip stays above the threshold") {
    const GridOperator op = build({BentStrip{CurvatureProfile::zero(), 1.0}}, 0.125, 10.0);
    const EigResult r = smallest_eigs(op);
    CHECK(r.eigenvalues.front() > *op.discrete_threshold);
    CHECK(count_below(op, *op.discrete_threshold) == 0);
  }

  TEST_CASE("sectors reject unbounded strips") {
    BuildOptions b;
    b.truncation = 4.0;
    GridSettings g;
    g.h = 0.25;
    g.sector = Sector::ee;
    CHECK_THROWS_AS(discretize(build_domain({BentStrip{CurvatureProfile::zero(), 1.0}}, b), g), ConfigError);
    CHECK(sector_from_string("oo") == Sector::oo);
    CHECK_THROWS_AS(sector_from_string("xy"), ConfigError);
  }

  TEST_CASE("transverse threshold converges to pi^2") {
    const double coarse = transverse_threshold(uniform_axis({0.0, 1.0}, 1.0 / 16));
    const double fine = transverse_threshold(uniform_axis({0.0, 1.0}, 1.0 / 32));
    CHECK(std::abs(fine - kPi * kPi) < std::abs(coarse - kPi * kPi));
    CHECK(std::abs(coarse - kPi * kPi) / (std::abs(fine - kPi * kPi)) == Approx(4.0).epsilon(0.01));
  }
}

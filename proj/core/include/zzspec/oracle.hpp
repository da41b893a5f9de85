#pragma once

#include <vector>

#include "zzspec/curvature.hpp"
#include "zzspec/geometry.hpp"

namespace zzspec {

/// J_nu(x) for x >= 0 by the ascending series (30 terms, |x| <= 12); larger
/// arguments fall back to std::cyl_bessel_j.
double bessel_j(double nu, double x);

/// Y_n(x), integer n >= 0, x > 0, by the logarithmic series on (0, 12].
double bessel_y(int n, double x);

/// index-th positive zero of J_order; order must be a non-negative
/// half-integer (0, 1/2, 1, 3/2, ...).
double bessel_zero(double order, int index);

enum class ReferenceKind { interval, rectangle, disc, annulus };

struct ReferenceShape {
  ReferenceKind kind = ReferenceKind::interval;
  // interval: length p0; rectangle: sides p0 x p1; disc: radius p0;
  // annulus: radii p0 < p1.
  double p0 = 1.0;
  double p1 = 1.0;
  int count = 1;
};

/// Ascending Dirichlet eigenvalues, repeated according to multiplicity.
std::vector<double> reference_spectrum(const ReferenceShape& shape);

/// Radial cross product J_n(k r_in) Y_n(k r_out) - J_n(k r_out) Y_n(k r_in).
double annulus_cross_product(int n, double k, double r_in, double r_out);

enum class GapKind { bending, deformation };

/// Leading weak-coupling prediction.
///   bending:     kappa_pred = beta^2 ||gamma||^2 / 8
///   deformation: gap_pred   = beta^2 pi^4 <f>^2 / d^6  (requires <f> > 0)
double effective_1d_gap(const CurvatureProfile& gamma, double beta);
double effective_1d_gap(const DeformationProfile& f, double d, double beta);

}  // namespace zzspec

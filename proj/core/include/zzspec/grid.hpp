#pragma once

#include <vector>

#include "zzspec/quadrature.hpp"

namespace zzspec {

/// Node coordinates of a 1D axis, both end points included, strictly increasing.
using Axis = std::vector<double>;

/// round(length / h) equal cells (at least one).
Axis uniform_axis(Interval range, double h);

/// Equal cells of size ~h_fine on `fine`, growing geometrically by `ratio`
/// (capped at h_max) towards both ends of `range`. The outer cell sequences are
/// rescaled so that the ends are hit exactly; the construction is mirror
/// symmetric whenever range and fine are symmetric about the same point.
Axis graded_axis(Interval range, Interval fine, double h_fine, double ratio, double h_max);

/// Bisects every cell; graded axes refine with an exact factor 2.
Axis refine_axis(const Axis& axis);

double min_spacing(const Axis& axis);
double max_spacing(const Axis& axis);

/// Index of the node closest to x.
std::size_t nearest_node(const Axis& axis, double x);

}  // namespace zzspec

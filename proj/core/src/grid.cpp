#include "zzspec/grid.hpp"

#include <algorithm>
#include <cmath>

#include "zzspec/errors.hpp"

namespace zzspec {

Axis uniform_axis(Interval range, double h) {
  if (!(range.length() > 0.0)) throw ConfigError("axis range is empty");
  if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
  const long n = std::max(1L, std::lround(range.length() / h));
  Axis x(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) x[i] = range.lo + range.length() * static_cast<double>(i) / n;
  x.back() = range.hi;
  return x;
}

namespace {

// Cell sizes growing from h0 by `ratio` up to h_max, filling `length` exactly.
std::vector<double> growing_cells(double length, double h0, double ratio, double h_max) {
  std::vector<double> cells;
  if (length <= 0.0) return cells;
  double sum = 0.0, h = h0;
  while (sum < length) {
    h = std::min(h * ratio, h_max);
    cells.push_back(h);
    sum += h;
  }
  // Drop the last cell if the overshoot is more than half of it, then rescale.
  if (cells.size() > 1 && sum - length > 0.5 * cells.back()) {
    sum -= cells.back();
    cells.pop_back();
  }
  const double scale = length / sum;
  for (double& c : cells) c *= scale;
  return cells;
}

}  // namespace

Axis graded_axis(Interval range, Interval fine, double h_fine, double ratio, double h_max) {
  if (!(range.length() > 0.0)) throw ConfigError("axis range is empty");
  if (!(h_fine > 0.0) || !(ratio >= 1.0) || !(h_max >= h_fine))
    throw ConfigError("graded axis needs h_fine > 0, ratio >= 1, h_max >= h_fine");
  fine.lo = std::max(fine.lo, range.lo);
  fine.hi = std::min(fine.hi, range.hi);
  if (!(fine.hi > fine.lo)) throw ConfigError("graded axis fine zone is empty");

  const Axis core = uniform_axis(fine, h_fine);
  const double h0 = core[1] - core[0];
  const std::vector<double> left = growing_cells(fine.lo - range.lo, h0, ratio, h_max);
  const std::vector<double> right = growing_cells(range.hi - fine.hi, h0, ratio, h_max);

  Axis x;
  x.reserve(core.size() + left.size() + right.size());
  double pos = fine.lo;
  std::vector<double> lpts;
  for (double c : left) lpts.push_back(pos -= c);
  for (auto it = lpts.rbegin(); it != lpts.rend(); ++it) x.push_back(*it);
  if (!left.empty()) x.front() = range.lo;
  x.insert(x.end(), core.begin(), core.end());
  pos = fine.hi;
  for (double c : right) x.push_back(pos += c);
  if (!right.empty()) x.back() = range.hi;
  return x;
}

Axis refine_axis(const Axis& axis) {
  Axis x;
  x.reserve(2 * axis.size() - 1);
  for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
    x.push_back(axis[i]);
    x.push_back(0.5 * (axis[i] + axis[i + 1]));
  }
  x.push_back(axis.back());
  return x;
}

double min_spacing(const Axis& axis) {
  double h = axis.back() - axis.front();
  for (std::size_t i = 1; i < axis.size(); ++i) h = std::min(h, axis[i] - axis[i - 1]);
  return h;
}

double max_spacing(const Axis& axis) {
  double h = 0.0;
  for (std::size_t i = 1; i < axis.size(); ++i) h = std::max(h, axis[i] - axis[i - 1]);
  return h;
}

std::size_t nearest_node(const Axis& axis, double x) {
  const auto it = std::lower_bound(axis.begin(), axis.end(), x);
  if (it == axis.begin()) return 0;
  if (it == axis.end()) return axis.size() - 1;
  const std::size_t k = static_cast<std::size_t>(it - axis.begin());
  return (x - axis[k - 1] <= axis[k] - x) ? k - 1 : k;
}

}  // namespace zzspec

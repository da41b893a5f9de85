#pragma once

#include <functional>
#include <vector>

namespace zzspec {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `n` points (Newton iteration on P_n).
GaussRule gauss_legendre(int n);

/// Composite Gauss-Legendre quadrature of `f` over `[lo, hi]`.
double integrate(const std::function<double(double)>& f, Interval range, int panels = 64,
                 int order = 8);

struct KernelIntegral {
  double value = 0.0;
  double rel_change = 0.0;  // between the last two panel refinements
  int panels = 0;
};

/// Evaluates  I = int int g(s) exp(-rate |s - s'|) g(s') ds ds'  over range x range.
///
/// Panels are shared between s and s', so the kink of the kernel lies on the
/// diagonal panels only; those are split into two triangles and integrated
/// with collapsed Gauss rules. Panel count doubles until the relative change
/// drops below `rel_tol`.
KernelIntegral exp_kernel_double_integral(const std::function<double(double)>& g, double rate,
                                          Interval range, double rel_tol = 1e-8,
                                          int order = 8, int max_panels = 4096);

}  // namespace zzspec

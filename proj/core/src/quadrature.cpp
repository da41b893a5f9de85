#include "zzspec/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace zzspec {

namespace {

// Returns (P_n(x), P_n'(x)).
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  if (n == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    const double dp = legendre(n, 0.0).second;
    rule.weights[n / 2] = 2.0 / (dp * dp);
  }
  return rule;
}

double integrate(const std::function<double(double)>& f, Interval range, int panels, int order) {
  const GaussRule rule = gauss_legendre(order);
  const double width = range.length() / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = range.lo + (p + 0.5) * width;
    double panel_sum = 0.0;
    for (int q = 0; q < order; ++q) panel_sum += rule.weights[q] * f(mid + 0.5 * width * rule.nodes[q]);
    sum += 0.5 * width * panel_sum;
  }
  return sum;
}

namespace {

double kernel_pass(const std::function<double(double)>& g, double rate, Interval range, int panels,
                   const GaussRule& rule) {
  const int q = static_cast<int>(rule.nodes.size());
  const double width = range.length() / panels;
  const double half = 0.5 * width;

  // Samples of g on every panel.
  std::vector<double> s(panels * q), gs(panels * q), ws(panels * q);
  for (int p = 0; p < panels; ++p) {
    const double mid = range.lo + (p + 0.5) * width;
    for (int k = 0; k < q; ++k) {
      s[p * q + k] = mid + half * rule.nodes[k];
      gs[p * q + k] = g(s[p * q + k]);
      ws[p * q + k] = half * rule.weights[k];
    }
  }

  double total = 0.0;
  // Off-diagonal panel pairs (I < J), counted twice.
  for (int I = 0; I < panels; ++I) {
    for (int J = I + 1; J < panels; ++J) {
      double block = 0.0;
      for (int a = 0; a < q; ++a) {
        const double ga = gs[I * q + a] * ws[I * q + a];
        if (ga == 0.0) continue;
        for (int b = 0; b < q; ++b) {
          block += ga * ws[J * q + b] * gs[J * q + b] * std::exp(-rate * (s[J * q + b] - s[I * q + a]));
        }
      }
      total += 2.0 * block;
    }
  }
  // Diagonal panels: 2 * int_{lo}^{hi} g(s) int_{lo}^{s} e^{-rate (s - t)} g(t) dt ds.
  for (int I = 0; I < panels; ++I) {
    const double lo = range.lo + I * width;
    double block = 0.0;
    for (int a = 0; a < q; ++a) {
      const double sa = s[I * q + a];
      const double inner_half = 0.5 * (sa - lo);
      double inner = 0.0;
      for (int b = 0; b < q; ++b) {
        const double t = lo + inner_half * (1.0 + rule.nodes[b]);
        inner += rule.weights[b] * std::exp(-rate * (sa - t)) * g(t);
      }
      block += ws[I * q + a] * gs[I * q + a] * inner_half * inner;
    }
    total += 2.0 * block;
  }
  return total;
}

}  // namespace

KernelIntegral exp_kernel_double_integral(const std::function<double(double)>& g, double rate,
                                          Interval range, double rel_tol, int order,
                                          int max_panels) {
  if (!(range.hi > range.lo)) throw std::invalid_argument("kernel integral: empty range");
  if (rate < 0.0) throw std::invalid_argument("kernel integral: negative decay rate");
  const GaussRule rule = gauss_legendre(order);
  KernelIntegral out;
  int panels = 8;
  double prev = kernel_pass(g, rate, range, panels, rule);
  for (;;) {
    panels *= 2;
    const double cur = kernel_pass(g, rate, range, panels, rule);
    const double scale = std::max(std::abs(cur), 1e-300);
    out.value = cur;
    out.panels = panels;
    out.rel_change = std::abs(cur - prev) / scale;
    if (out.rel_change < rel_tol || std::abs(cur - prev) < 1e-15 || panels >= max_panels) break;
    prev = cur;
  }
  return out;
}

}  // namespace zzspec

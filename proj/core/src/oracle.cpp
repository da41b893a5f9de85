#include "zzspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zzspec/errors.hpp"

namespace zzspec {

namespace {

constexpr double kSeriesLimit = 12.0;
constexpr int kSeriesTerms = 30;

bool half_integer(double v) {
  return v >= 0.0 && std::abs(2.0 * v - std::round(2.0 * v)) < 1e-14;
}

}  // namespace

double bessel_j(double nu, double x) {
  if (nu < 0.0) throw OutOfScopeError("negative Bessel order");
  if (x < 0.0) throw OutOfScopeError("negative Bessel argument");
  if (x > kSeriesLimit) return std::cyl_bessel_j(nu, x);
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double half = 0.5 * x;
  double term = std::pow(half, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 0; k < kSeriesTerms; ++k) {
    term *= -half * half / ((k + 1.0) * (k + 1.0 + nu));
    sum += term;
  }
  return sum;
}

double bessel_y(int n, double x) {
  if (n < 0) throw OutOfScopeError("negative Bessel order");
  if (!(x > 0.0)) throw OutOfScopeError("Y_n needs a positive argument");
  if (x > kSeriesLimit) return std::cyl_neumann(static_cast<double>(n), x);
  const double pi = std::numbers::pi;
  const double half = 0.5 * x;
  double y = 2.0 / pi * std::log(half) * bessel_j(n, x);

  // Finite sum -(1/pi) sum_{k<n} (n-k-1)!/k! (x/2)^(2k-n).
  double fin = 0.0;
  for (int k = 0; k < n; ++k)
    fin += std::tgamma(n - k) / std::tgamma(k + 1.0) * std::pow(half, 2.0 * k - n);
  y -= fin / pi;

  // -(1/pi) sum_k (psi(k+1) + psi(n+k+1)) (-1)^k (x/2)^(2k+n) / (k! (n+k)!).
  const double euler = std::numbers::egamma;
  double hk = 0.0;   // H_k
  double hnk = 0.0;  // H_{n+k}
  for (int m = 1; m <= n; ++m) hnk += 1.0 / m;
  double term = std::pow(half, n) / std::tgamma(n + 1.0);
  double sum = 0.0;
  for (int k = 0; k <= kSeriesTerms; ++k) {
    sum += (hk + hnk - 2.0 * euler) * term;
    term *= -half * half / ((k + 1.0) * (k + 1.0 + n));
    hk += 1.0 / (k + 1);
    hnk += 1.0 / (n + k + 1);
  }
  y -= sum / pi;
  return y;
}

double bessel_zero(double order, int index) {
  if (!half_integer(order)) throw OutOfScopeError("bessel_zero supports half-integer orders >= 0");
  if (index < 1) throw OutOfScopeError("bessel_zero index must be >= 1");
  auto f = [order](double x) { return bessel_j(order, x); };
  const double step = 0.05;
  double a = std::max(order, 1e-3);
  double fa = f(a);
  int found = 0;
  for (;;) {
    const double b = a + step;
    const double fb = f(b);
    if ((fa > 0.0) != (fb > 0.0) || fb == 0.0) {
      if (++found == index) {
        double lo = a, hi = b, flo = fa;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid);
          if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        double z = 0.5 * (lo + hi);
        // Newton polish with J'_nu = (nu/x) J_nu - J_{nu+1}.
        for (int it = 0; it < 3; ++it) {
          const double jz = f(z);
          const double dj = order / z * jz - bessel_j(order + 1.0, z);
          if (dj == 0.0) break;
          const double next = z - jz / dj;
          if (!(next > a && next < b)) break;
          z = next;
        }
        return z;
      }
    }
    a = b;
    fa = fb;
  }
}

double annulus_cross_product(int n, double k, double r_in, double r_out) {
  return bessel_j(n, k * r_in) * bessel_y(n, k * r_out) - bessel_j(n, k * r_out) * bessel_y(n, k * r_in);
}

namespace {

std::vector<double> first_n(std::vector<double> v, int count) {
  std::sort(v.begin(), v.end());
  if (static_cast<int>(v.size()) > count) v.resize(static_cast<std::size_t>(count));
  return v;
}

std::vector<double> annulus_spectrum(double r_in, double r_out, int count) {
  const double width = r_out - r_in;
  double k_max = std::numbers::pi / width * (1.0 + count);
  for (;;) {
    std::vector<double> values;
    const double dk = std::numbers::pi / width / 64.0;
    for (int n = 0; n / r_out < k_max; ++n) {
      const int mult = n == 0 ? 1 : 2;
      auto f = [&](double k) { return annulus_cross_product(n, k, r_in, r_out); };
      double a = dk, fa = f(a);
      while (a < k_max) {
        const double b = a + dk;
        const double fb = f(b);
        if ((fa > 0.0) != (fb > 0.0)) {
          double lo = a, hi = b, flo = fa;
          for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if ((fm > 0.0) == (flo > 0.0)) {
              lo = mid;
              flo = fm;
            } else {
              hi = mid;
            }
          }
          const double k = 0.5 * (lo + hi);
          for (int m = 0; m < mult; ++m) values.push_back(k * k);
        }
        a = b;
        fa = fb;
      }
    }
    if (static_cast<int>(values.size()) >= count) return first_n(values, count);
    k_max *= 2.0;
  }
}

}  // namespace

std::vector<double> reference_spectrum(const ReferenceShape& shape) {
  if (shape.count < 1) throw ConfigError("reference_spectrum needs count >= 1");
  const double pi = std::numbers::pi;
  const int count = shape.count;
  switch (shape.kind) {
    case ReferenceKind::interval: {
      if (!(shape.p0 > 0.0)) throw ConfigError("interval length must be positive");
      std::vector<double> v;
      for (int n = 1; n <= count; ++n) v.push_back(std::pow(pi * n / shape.p0, 2));
      return v;
    }
    case ReferenceKind::rectangle: {
      if (!(shape.p0 > 0.0 && shape.p1 > 0.0)) throw ConfigError("rectangle sides must be positive");
      // Every value below (count+1)^2 pi^2 / min^2 is enumerated.
      const double bound = std::pow(pi * (count + 1) / std::min(shape.p0, shape.p1), 2);
      std::vector<double> v;
      for (int m = 1; std::pow(pi * m / shape.p0, 2) <= bound; ++m)
        for (int n = 1;; ++n) {
          const double lam = pi * pi * (m * m / (shape.p0 * shape.p0) + n * n / (shape.p1 * shape.p1));
          if (lam > bound) break;
          v.push_back(lam);
        }
      return first_n(v, count);
    }
    case ReferenceKind::disc: {
      if (!(shape.p0 > 0.0)) throw ConfigError("disc radius must be positive");
      std::vector<double> v;
      // j_{nu,k} > nu, so orders up to the count-th radial zero of J_0 suffice.
      const double limit = bessel_zero(0.0, 1) + pi * (count + 1);
      for (int nu = 0; nu < limit; ++nu)
        for (int k = 1; k <= count; ++k) {
          const double z = bessel_zero(nu, k);
          if (z > limit) break;
          const double lam = std::pow(z / shape.p0, 2);
          v.push_back(lam);
          if (nu > 0) v.push_back(lam);
        }
      return first_n(v, count);
    }
    case ReferenceKind::annulus:
      if (!(shape.p0 > 0.0 && shape.p1 > shape.p0))
        throw ConfigError("annulus radii must satisfy 0 < r_in < r_out");
      return annulus_spectrum(shape.p0, shape.p1, count);
  }
  return {};
}

double effective_1d_gap(const CurvatureProfile& gamma, double beta) {
  return beta * beta * gamma.l2_norm_squared() / 8.0;
}

double effective_1d_gap(const DeformationProfile& f, double d, double beta) {
  if (!(d > 0.0)) throw ConfigError("strip width must be positive");
  const double mean = f.mean();
  if (!(mean > 0.0)) throw OutOfScopeError("deformation oracle needs <f> > 0");
  return beta * beta * std::pow(std::numbers::pi, 4) * mean * mean / std::pow(d, 6);
}

}  // namespace zzspec

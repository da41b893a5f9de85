#include "zzspec/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "zzspec/errors.hpp"
#include "zzspec/oracle.hpp"
#include "zzspec/quadrature.hpp"

namespace zzspec {

namespace {

constexpr double kPi = std::numbers::pi;

void require_n_max(int n_max) {
  if (n_max < 2) throw ConfigError("n_max must be >= 2");
}

// Curvature entering a kernel integral must vanish at the support edges,
// otherwise gamma' carries delta functions there.
void require_smooth_edges(const CurvatureProfile& gamma) {
  if (gamma.identically_zero()) return;
  const Interval sup = gamma.support();
  const double tol = 1e-10 * std::max(gamma.sup_norm(), 1e-300);
  if (std::abs(gamma(sup.lo)) > tol || std::abs(gamma(sup.hi)) > tol)
    throw ConfigError("curvature is not differentiable at the support edges");
}

}  // namespace

double AsymptoticPrediction::ingredient(const std::string& name) const {
  for (const auto& [k, v] : ingredients)
    if (k == name) return v;
  throw std::out_of_range("no ingredient '" + name + "'");
}

bool AsymptoticPrediction::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

double transverse_overlap(int n, double a) {
  if (n < 1) throw ConfigError("mode index must be >= 1");
  if (n % 2 == 1) return 0.0;
  const double q = static_cast<double>(n) * n - 1.0;
  return -16.0 * a * n / (kPi * kPi * q * q);
}

// ---------------------------------------------------------------------------

AsymptoticPrediction bent_strip_series(const CurvatureProfile& gamma, double a, double beta,
                                       int n_max) {
  require_n_max(n_max);
  if (!(a > 0.0)) throw ConfigError("halfwidth must be > 0");
  require_smooth_edges(gamma);

  AsymptoticPrediction out;
  out.kind = "bent_strip";
  out.quantity = "kappa";
  out.n_max = n_max;
  out.validity = "leading order in beta; O(beta^3) remainder not estimated";
  const double norm2 = gamma.l2_norm_squared();
  out.ingredients.emplace_back("gamma_l2_norm_squared", norm2);
  out.ingredients.emplace_back("leading", beta * beta * norm2 / 8.0);
  if (gamma.identically_zero()) {
    out.flags.push_back("zero_curvature");
    return out;
  }

  const auto gdot = [&](double s) { return gamma.derivative(s); };
  double correction = 0.0;
  double last = 0.0;
  for (int n = 2; n <= n_max; n += 2) {
    const double ov = transverse_overlap(n, a);
    const double rho = kPi / (2.0 * a) * std::sqrt(static_cast<double>(n) * n - 1.0);
    const KernelIntegral k = exp_kernel_double_integral(gdot, rho, gamma.support());
    const double term = 0.5 * ov * ov * rho * k.value;
    out.quadrature_error = std::max(out.quadrature_error, k.rel_change);
    out.modes.push_back(n);
    out.terms.push_back(term);
    correction += term;
    last = term;
  }
  // Terms fall off like n^-6; the even-n tail beyond n_max sums to about
  // last * n_max / 10.
  const double prefactor = beta * beta / 8.0;
  out.tail_estimate = prefactor * last * n_max / 10.0;
  out.ingredients.emplace_back("correction", prefactor * correction);
  out.value = prefactor * (norm2 - correction);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<SectionMode> disc_modes(double radius, int count) {
  if (!(radius > 0.0)) throw ConfigError("disc radius must be > 0");
  if (count < 1) throw ConfigError("mode count must be >= 1");
  struct Entry {
    double mu;
    int nu;
    int k;
  };
  std::vector<Entry> entries;
  const int span = count + 2;
  for (int nu = 0; nu <= span; ++nu)
    for (int k = 1; k <= span; ++k) {
      const double j = bessel_zero(static_cast<double>(nu), k);
      entries.push_back({j * j / (radius * radius), nu, k});
    }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return x.mu < y.mu || (x.mu == y.mu && x.nu < y.nu);
  });

  std::vector<SectionMode> modes;
  for (const Entry& e : entries) {
    if (static_cast<int>(modes.size()) >= count) break;
    const double j = bessel_zero(static_cast<double>(e.nu), e.k);
    const double jn1 = bessel_j(static_cast<double>(e.nu + 1), j);
    // int_0^R J_nu(j r / R)^2 r dr = R^2 J_{nu+1}(j)^2 / 2.
    const double radial2 = radius * radius * jn1 * jn1 / 2.0;
    const double nu = static_cast<double>(e.nu);
    const auto radial = [=](double r) { return bessel_j(nu, j * r / radius); };
    if (e.nu == 0) {
      const double norm = 1.0 / std::sqrt(2.0 * kPi * radial2);
      modes.push_back({e.mu, [=](double r, double) { return norm * radial(r); },
                       "J0 k=" + std::to_string(e.k)});
    } else {
      const double norm = 1.0 / std::sqrt(kPi * radial2);
      const int n = e.nu;
      modes.push_back({e.mu,
                       [=](double r, double th) { return norm * radial(r) * std::cos(n * th); },
                       "J" + std::to_string(n) + " k=" + std::to_string(e.k) + " cos"});
      if (static_cast<int>(modes.size()) < count)
        modes.push_back(
            {e.mu, [=](double r, double th) { return norm * radial(r) * std::sin(n * th); },
             "J" + std::to_string(n) + " k=" + std::to_string(e.k) + " sin"});
    }
  }
  return modes;
}

AsymptoticPrediction bent_tube_series(const CurvatureProfile& gamma, const CurvatureProfile& tau,
                                      const std::vector<SectionMode>& modes,
                                      const PolarQuadrature& quad, double beta, int n_max) {
  require_n_max(n_max);
  if (modes.size() < 2) throw ConfigError("need the ground mode and at least one more");
  for (std::size_t i = 1; i < modes.size(); ++i)
    if (!(modes[i].mu > modes[0].mu)) throw ConfigError("mode ordering violated: mu_n <= mu_1");
  require_smooth_edges(gamma);

  AsymptoticPrediction out;
  out.kind = "bent_tube";
  out.quantity = "kappa";
  out.n_max = n_max;
  out.validity = "leading order in beta; O(beta^3) remainder not estimated";
  const double norm2 = gamma.l2_norm_squared();
  out.ingredients.emplace_back("gamma_l2_norm_squared", norm2);
  out.ingredients.emplace_back("leading", beta * beta * norm2 / 8.0);
  out.ingredients.emplace_back("mu1", modes[0].mu);
  if (gamma.identically_zero() || beta == 0.0) {
    out.value = beta * beta * norm2 / 8.0;
    return out;
  }

  // Dipole moments m_n = (int chi_1 chi_n r cos theta, int chi_1 chi_n r sin theta).
  const GaussRule rule = gauss_legendre(quad.n_r);
  const double R = quad.radius;
  const double dth = 2.0 * kPi / quad.n_theta;
  const auto dipole = [&](const SectionMode& m) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double r = 0.5 * R * (rule.nodes[q] + 1.0);
      const double wr = 0.5 * R * rule.weights[q] * r;
      for (int t = 0; t < quad.n_theta; ++t) {
        const double th = t * dth;
        const double v = modes[0].chi(r, th) * m.chi(r, th) * r * wr * dth;
        m1 += v * std::cos(th);
        m2 += v * std::sin(th);
      }
    }
    return std::pair<double, double>{m1, m2};
  };

  // Phase alpha(s) = int_0^s tau by the trapezoid rule on a fine table.
  Interval span = gamma.support();
  span.lo = std::min(span.lo, 0.0);
  span.hi = std::max(span.hi, 0.0);
  const int n_tab = 8192;
  const double ds = span.length() / n_tab;
  std::vector<double> alpha_tab(n_tab + 1, 0.0);
  for (int i = 1; i <= n_tab; ++i)
    alpha_tab[i] = alpha_tab[i - 1] + 0.5 * ds * (tau(span.lo + (i - 1) * ds) + tau(span.lo + i * ds));
  const int i0 = static_cast<int>(std::lround((0.0 - span.lo) / ds));
  const double alpha0 = alpha_tab[static_cast<std::size_t>(i0)];
  const auto alpha = [&](double s) {
    const double t = std::clamp((s - span.lo) / ds, 0.0, static_cast<double>(n_tab));
    const int i = std::min(static_cast<int>(t), n_tab - 1);
    const double w = t - i;
    return (1.0 - w) * alpha_tab[i] + w * alpha_tab[i + 1] - alpha0;
  };

  double correction = 0.0;
  double last = 0.0;
  const int limit = std::min<int>(n_max, static_cast<int>(modes.size()));
  for (int n = 1; n < limit; ++n) {
    const auto [m1, m2] = dipole(modes[n]);
    const double rate = std::sqrt(modes[n].mu - modes[0].mu);
    double term = 0.0;
    if (std::abs(m1) + std::abs(m2) > 1e-12) {
      const auto h = [&](double s) {
        const double al = alpha(s), g = gamma(s), gd = gamma.derivative(s), t = tau(s);
        const double p = gd * std::cos(al) - g * t * std::sin(al);
        const double q = gd * std::sin(al) + g * t * std::cos(al);
        return m1 * p + m2 * q;
      };
      const KernelIntegral k = exp_kernel_double_integral(h, rate, gamma.support());
      out.quadrature_error = std::max(out.quadrature_error, k.rel_change);
      term = rate * k.value;
    }
    out.modes.push_back(n + 1);
    out.terms.push_back(term);
    correction += term;
    if (term != 0.0) last = term;
  }
  const double b2 = beta * beta;
  out.ingredients.emplace_back("correction", b2 * correction / 16.0);
  out.tail_estimate = b2 * std::abs(last) / 16.0;
  out.value = b2 * norm2 / 8.0 - b2 * correction / 16.0;
  return out;
}

// ---------------------------------------------------------------------------

double critical_constant() { return 24.0 / (9.0 + std::sqrt(117.0 + 48.0 * kPi * kPi)); }

AsymptoticPrediction deformed_strip_prediction(const DeformationProfile& f, double d,
                                               double beta) {
  if (!(d > 0.0)) throw ConfigError("strip width must be > 0");
  AsymptoticPrediction out;
  out.kind = "deformed_strip";
  out.quantity = "gap";
  const double mean = f.mean();
  const double l1_scale = std::sqrt(f.l2_norm_squared() * f.support().length());
  const double pi4 = kPi * kPi * kPi * kPi;
  const double literal = beta * beta * pi4 / (d * d) * mean;
  const double oracle = beta * beta * pi4 * mean * mean / std::pow(d, 6);
  out.ingredients.emplace_back("mean", mean);
  out.ingredients.emplace_back("literal_gap", literal);
  out.ingredients.emplace_back("oracle_gap", oracle);
  out.flags.push_back("literal_gap_dimensionally_suspect");
  out.value = oracle;
  out.validity = "leading order in beta";

  if (std::abs(mean) <= 1e-12 * std::max(l1_scale, 1e-300)) {
    const double ratio = f.derivative_l2_norm_squared() / f.l2_norm_squared();
    const double bound = critical_constant() * kPi * kPi / (d * d);
    out.ingredients.emplace_back("derivative_ratio", ratio);
    out.ingredients.emplace_back("critical_bound", bound);
    out.ingredients.emplace_back("critical_constant", critical_constant());
    out.ingredients.emplace_back("expected_exponent", 4.0);
    out.value = 0.0;
    out.flags.push_back("critical");
    out.verdict = ratio < bound ? "critical: bound state expected, gap ~ beta^4"
                                : "critical: smallness condition fails, no prediction";
  } else if (mean < 0.0) {
    out.value = 0.0;
    out.verdict = "negative mean: discrete spectrum empty for small beta";
  } else {
    out.ingredients.emplace_back("expected_exponent", 2.0);
    out.verdict = "positive mean: one bound state, gap ~ beta^2";
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Unitary 2D Fourier transform of samples m(x_i, y_j) on a uniform grid,
// evaluated on omega_k = k dw, |k| <= K, by separable direct sums.
std::vector<double> spectrum_abs2(const std::vector<double>& m, const std::vector<double>& x,
                                  double h, double dw, int K) {
  const int n = static_cast<int>(x.size());
  const int nw = 2 * K + 1;
  using C = std::complex<double>;
  std::vector<C> half(static_cast<std::size_t>(nw) * n);  // (omega1, y_j)
  for (int k = 0; k < nw; ++k) {
    const double w = (k - K) * dw;
    for (int j = 0; j < n; ++j) {
      C s = 0.0;
      for (int i = 0; i < n; ++i) s += m[static_cast<std::size_t>(j) * n + i] * std::polar(1.0, -w * x[i]);
      half[static_cast<std::size_t>(k) * n + j] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(nw) * nw);
  const double scale = h * h / (2.0 * kPi);
  for (int k1 = 0; k1 < nw; ++k1)
    for (int k2 = 0; k2 < nw; ++k2) {
      const double w2 = (k2 - K) * dw;
      C s = 0.0;
      for (int j = 0; j < n; ++j) s += half[static_cast<std::size_t>(k1) * n + j] * std::polar(1.0, -w2 * x[j]);
      out[static_cast<std::size_t>(k1) * nw + k2] = std::norm(scale * s);
    }
  return out;
}

struct LayerSums {
  std::vector<double> per_mode;  // int |m0^|^2 / (|omega|^2 + k_n^2)
};

LayerSums layer_integrals(const LayerProfile& p, double a, int n_max, int samples, int padding) {
  const double L = p.half_extent;
  const int n = samples;
  const double h = 2.0 * L / n;
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = -L + (i + 0.5) * h;
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  const double fd = 1e-3 * h;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double px = x[static_cast<std::size_t>(i)], py = x[static_cast<std::size_t>(j)];
      double lap;
      if (p.laplacian) {
        lap = p.laplacian(px, py);
      } else {
        lap = (p.f(px + fd, py) + p.f(px - fd, py) + p.f(px, py + fd) + p.f(px, py - fd) -
               4.0 * p.f(px, py)) / (fd * fd);
      }
      m[static_cast<std::size_t>(j) * n + i] = 0.5 * lap;
    }
  const double dw = 2.0 * kPi / (padding * 2.0 * L);
  const int K = static_cast<int>(std::ceil((kPi / h) / dw));
  const std::vector<double> s2 = spectrum_abs2(m, x, h, dw, K);
  LayerSums out;
  const int nw = 2 * K + 1;
  for (int nn = 2; nn <= n_max; nn += 2) {
    const double kn2 = std::pow(kPi / (2.0 * a), 2) * (static_cast<double>(nn) * nn - 1.0);
    double sum = 0.0;
    for (int k1 = 0; k1 < nw; ++k1)
      for (int k2 = 0; k2 < nw; ++k2) {
        const double w1 = (k1 - K) * dw, w2 = (k2 - K) * dw;
        sum += s2[static_cast<std::size_t>(k1) * nw + k2] / (w1 * w1 + w2 * w2 + kn2);
      }
    out.per_mode.push_back(sum * dw * dw);
  }
  return out;
}

void attach_gap(AsymptoticPrediction& out, double w, double length, double threshold,
                const UnitSystem& units) {
  out.ingredients.emplace_back("w", w);
  out.ingredients.emplace_back("gap_length", length);
  if (w >= 0.0) {
    out.flags.push_back("degenerate");
    out.verdict = "w(beta) = 0: no prediction";
    return;
  }
  const double factor = std::exp(2.0 / w);
  const double gap = factor / (length * length);
  out.ingredients.emplace_back("gap_factor", factor);
  out.ingredients.emplace_back("gap", gap);
  out.ingredients.emplace_back("lambda1", dirac_energy(threshold - gap, units));
  out.flags.push_back("gap_length_convention");
}

}  // namespace

AsymptoticPrediction layer_weak_coupling(const LayerProfile& f, double a, double beta,
                                         const UnitSystem& units, int n_max,
                                         const LayerQuadrature& quad) {
  require_n_max(n_max);
  if (!(a > 0.0)) throw ConfigError("halfwidth must be > 0");
  if (!f.f) throw ConfigError("layer profile is empty");
  if (quad.samples < 8 || quad.padding < 1) throw ConfigError("layer quadrature too coarse");
  AsymptoticPrediction out;
  out.kind = "curved_layer";
  out.quantity = "w";
  out.n_max = n_max;
  out.validity = "leading order; gap length scale L = 2a is a convention";

  const LayerSums fine = layer_integrals(f, a, n_max, quad.samples, quad.padding);
  const LayerSums coarse = layer_integrals(f, a, n_max, quad.samples / 2, quad.padding);
  const double pa4 = std::pow(kPi / (2.0 * a), 4);
  double series = 0.0, series_coarse = 0.0;
  std::size_t idx = 0;
  for (int n = 2; n <= n_max; n += 2, ++idx) {
    const double ov = transverse_overlap(n, a);
    const double q = static_cast<double>(n) * n - 1.0;
    const double weight = ov * ov * pa4 * q * q;
    const double term = -weight * fine.per_mode[idx];
    out.modes.push_back(n);
    out.terms.push_back(term);
    series += term;
    series_coarse += -weight * coarse.per_mode[idx];
  }
  out.quadrature_error =
      series != 0.0 ? std::abs(series - series_coarse) / std::abs(series) : 0.0;
  const double w = beta * beta * series;
  out.value = w;
  out.tail_estimate = beta * beta * std::abs(out.terms.back()) * n_max / 10.0;
  attach_gap(out, w, 2.0 * a, std::pow(kPi / (2.0 * a), 2), units);
  return out;
}

AsymptoticPrediction bulged_layer_weak_coupling(double mean_f, double d, double beta,
                                                const UnitSystem& units) {
  if (!(d > 0.0)) throw ConfigError("layer width must be > 0");
  if (!(mean_f > 0.0)) throw ConfigError("bulged layer needs <f> > 0");
  AsymptoticPrediction out;
  out.kind = "bulged_layer";
  out.quantity = "w";
  out.validity = "leading order in beta; gap length scale L = d is a convention";
  out.ingredients.emplace_back("mean", mean_f);
  const double w = -beta * kPi / (d * d) * mean_f;
  out.value = w;
  attach_gap(out, w, d, std::pow(kPi / d, 2), units);
  return out;
}

// ---------------------------------------------------------------------------

WindowCount window_count(double d1, double d2, double window) {
  if (!(d1 > 0.0) || !(d2 > 0.0) || !(window > 0.0))
    throw ConfigError("window count needs positive widths and window");
  WindowCount out;
  const double d = std::max(d1, d2);
  out.ratio = std::min(d1, d2) / d;
  const double s = std::sqrt(1.0 - 1.0 / ((1.0 + out.ratio) * (1.0 + out.ratio)));
  out.floor_term = static_cast<int>(std::floor(window / d * s));
  out.per_sign_lo = std::max(1, out.floor_term);
  out.per_sign_hi = out.per_sign_lo + 1;
  out.total_lo = 2 * out.per_sign_lo;
  out.total_hi = 2 * out.per_sign_hi;
  return out;
}

// ---------------------------------------------------------------------------

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ConfigError("fit: size mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw ConfigError("fit: insufficient data (need >= 3 points)");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("fit: insufficient data (x values coincide)");
  LinearFit out;
  out.points = static_cast<int>(n);
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - out.intercept - out.slope * x[i];
    ss += r * r;
  }
  const double s2 = ss / static_cast<double>(n - 2);
  out.residual_rms = std::sqrt(ss / static_cast<double>(n));
  out.slope_stderr = std::sqrt(s2 / sxx);
  out.intercept_stderr = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
  return out;
}

double student_t_quantile(double confidence, int dof) {
  if (dof < 1) throw ConfigError("t quantile needs dof >= 1");
  const boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.5 + 0.5 * confidence);
}

bool PowerLawFit::consistent(double tolerance) const {
  return std::abs(exponent - expected) <= tolerance;
}

PowerLawFit power_law_fit(const std::vector<double>& x, const std::vector<double>& gap,
                          double expected_exponent) {
  if (x.size() != gap.size()) throw ConfigError("power-law fit: size mismatch");
  if (x.size() < 4) throw ConfigError("power-law fit: insufficient data (need >= 4 points)");
  PowerLawFit out;
  out.expected = expected_exponent;
  std::vector<double> lx, lg;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw ConfigError("power-law fit: x must be > 0");
    if (gap[i] > 0.0) {
      out.used.push_back(i);
      lx.push_back(std::log(x[i]));
      lg.push_back(std::log(gap[i]));
    } else {
      out.excluded.push_back(i);
    }
  }
  if (lx.size() < 3) throw ConfigError("power-law fit: insufficient positive gaps");
  const LinearFit fit = linear_fit(lx, lg);
  out.exponent = fit.slope;
  out.stderr_exponent = fit.slope_stderr;
  out.half_width = student_t_quantile(0.95, fit.points - 2) * fit.slope_stderr;
  out.coefficient = std::exp(fit.intercept);
  out.log_coefficient_stderr = fit.intercept_stderr;
  return out;
}

}  // namespace zzspec

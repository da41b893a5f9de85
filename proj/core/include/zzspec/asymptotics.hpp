#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zzspec/curvature.hpp"
#include "zzspec/dirac.hpp"
#include "zzspec/geometry.hpp"

namespace zzspec {

/// A weak-coupling or counting prediction with the ingredients that produced it.
struct AsymptoticPrediction {
  std::string kind;
  std::string quantity;  // "kappa", "gap", "w"
  double value = 0.0;
  std::vector<std::pair<std::string, double>> ingredients;
  std::vector<int> modes;     // transverse index n of each entry of `terms`
  std::vector<double> terms;  // per-mode contributions before the common prefactor
  int n_max = 0;
  double quadrature_error = 0.0;  // relative
  double tail_estimate = 0.0;     // same units as `value`
  std::string validity;
  std::string verdict;
  std::vector<std::string> flags;

  /// Named ingredient; throws std::out_of_range if absent.
  double ingredient(const std::string& name) const;
  bool has_flag(const std::string& flag) const;
};

/// (chi_n, u chi_1) on (-a, a) with chi_n(u) = a^{-1/2} sin(n pi (u + a) / 2a):
/// -16 a n / (pi^2 (n^2 - 1)^2) for even n, 0 for odd n.
double transverse_overlap(int n, double a);

/// kappa = sqrt((pi/2a)^2 - eps) to second order in beta:
///   (beta^2/8) { ||gamma||^2 - 1/2 sum_{n even <= n_max} (chi_n, u chi_1)^2 rho_n
///                int int gamma'(s) e^{-rho_n |s-s'|} gamma'(s') ds ds' },
/// rho_n = (pi/2a) sqrt(n^2 - 1); beta multiplies gamma including its own scale.
AsymptoticPrediction bent_strip_series(const CurvatureProfile& gamma, double a, double beta,
                                       int n_max = 20);

/// Dirichlet eigenmode of a tube cross section.
struct SectionMode {
  double mu = 0.0;
  std::function<double(double r, double theta)> chi;  // L^2-normalized
  std::string label;
};

/// Polar quadrature of the cross section (Gauss in r, trapezoid in theta).
struct PolarQuadrature {
  double radius = 1.0;
  int n_r = 48;
  int n_theta = 64;
};

/// The `count` lowest Dirichlet modes of the disc of radius R (cos/sin pairs
/// for angular order >= 1), ascending in mu.
std::vector<SectionMode> disc_modes(double radius, int count);

/// Weak-bending series for a tube with curvature gamma and torsion tau:
///   (beta^2/8) ||gamma||^2 - (beta^2/16) sum_n sqrt(mu_n - mu_1)
///     int int h_n(s) e^{-sqrt(mu_n - mu_1) |s-s'|} h_n(s') ds ds',
/// h_n(s) = int chi_1 chi_n (r gamma tau sin(theta - alpha) + r gamma' cos(theta - alpha)),
/// alpha' = tau with alpha(0) = 0. modes[0] is the ground mode.
AsymptoticPrediction bent_tube_series(const CurvatureProfile& gamma, const CurvatureProfile& tau,
                                      const std::vector<SectionMode>& modes,
                                      const PolarQuadrature& quad, double beta, int n_max = 20);

/// 24 / (9 + sqrt(117 + 48 pi^2)).
double critical_constant();

/// Deformed strip 0 < y < d + beta f(x): literal gap beta^2 (pi^4/d^2) <f>
/// (dimensionally suspect), oracle gap beta^2 pi^4 <f>^2 / d^6, and for
/// <f> = 0 the critical-case verdict with the beta^4 window.
AsymptoticPrediction deformed_strip_prediction(const DeformationProfile& f, double d, double beta);

/// Profile on R^2 for the layer formulas.
struct LayerProfile {
  std::function<double(double, double)> f;
  /// Laplacian of f; finite differences of f when empty.
  std::function<double(double, double)> laplacian;
  double half_extent = 1.0;  // f vanishes outside [-half_extent, half_extent]^2
};

struct LayerQuadrature {
  int samples = 64;   // per axis on the support box
  int padding = 4;    // frequency resolution 2 pi / (padding * box length)
};

/// Curved layer of halfwidth a:
///   w = -beta^2 sum_n (chi_1, u chi_n)^2 (pi/2a)^4 (n^2-1)^2
///       int |m0^(omega)|^2 / (|omega|^2 + (pi/2a)^2 (n^2-1)) d omega,
/// m0 = Delta f / 2 with the unitary Fourier transform; gap e^{2/w} / L^2, L = 2a.
AsymptoticPrediction layer_weak_coupling(const LayerProfile& f, double a, double beta,
                                         const UnitSystem& units, int n_max = 20,
                                         const LayerQuadrature& quad = {});

/// Bulged layer of width d: w = -beta (pi / d^2) <f>, gap e^{2/w} / d^2.
/// Throws ConfigError if <f> <= 0.
AsymptoticPrediction bulged_layer_weak_coupling(double mean_f, double d, double beta,
                                                const UnitSystem& units);

struct WindowCount {
  int floor_term = 0;  // floor((l/d) sqrt(1 - (1 + rho)^{-2})), d = max, rho = min/max
  int per_sign_lo = 1;
  int per_sign_hi = 2;
  int total_lo = 2;
  int total_hi = 4;
  double ratio = 1.0;
};

WindowCount window_count(double d1, double d2, double window);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double residual_rms = 0.0;
  int points = 0;
};

/// Ordinary least squares y = intercept + slope x; needs >= 3 points.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Two-sided Student-t quantile for the given confidence and degrees of freedom.
double student_t_quantile(double confidence, int dof);

struct PowerLawFit {
  double exponent = 0.0;
  double stderr_exponent = 0.0;
  double half_width = 0.0;  // 95% confidence from the Student-t quantile
  double coefficient = 0.0;  // gap ~ coefficient * x^exponent
  double log_coefficient_stderr = 0.0;
  double expected = 0.0;
  std::vector<std::size_t> used;
  std::vector<std::size_t> excluded;  // non-positive gaps
  bool consistent(double tolerance) const;
};

/// Slope of log gap against log x. Needs >= 4 pairs and >= 3 positive gaps.
PowerLawFit power_law_fit(const std::vector<double>& x, const std::vector<double>& gap,
                          double expected_exponent);

}  // namespace zzspec

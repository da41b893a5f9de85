#pragma once

#include <string>
#include <vector>

#include "zzspec/quadrature.hpp"

namespace zzspec {

enum class ProfileKind { zero, constant, gaussian, harmonic, tabulated };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

/// Signed curvature gamma(s) of a strip axis, in 1/length.
///
/// The value returned by operator() already includes the bending scale
/// `scale()`. Outside `support()` the profile is exactly zero. Gaussian
/// profiles are truncated where exp(-t^2) drops below 1e-21.
class CurvatureProfile {
 public:
  CurvatureProfile() = default;

  static CurvatureProfile zero();
  static CurvatureProfile constant(double kappa, Interval support);
  /// gamma(s) = amplitude * exp(-((s - center) / width)^2).
  static CurvatureProfile gaussian(double amplitude, double width, double center = 0.0);
  /// gamma(s) = base * (1 + rel_amplitude * cos(2 pi mode s / period)) on [0, period].
  static CurvatureProfile harmonic(double base, double rel_amplitude, int mode, double period);
  /// Piecewise-linear interpolation of samples (s_i strictly increasing).
  static CurvatureProfile tabulated(std::vector<double> s, std::vector<double> gamma);

  CurvatureProfile scaled(double beta) const;

  ProfileKind kind() const { return kind_; }
  double scale() const { return scale_; }
  Interval support() const { return support_; }
  bool identically_zero() const;

  double operator()(double s) const;
  double derivative(double s) const;

  /// sup |gamma| over the support (scale included).
  double sup_norm() const;
  /// int gamma ds over the support.
  double total_turn() const;
  /// ||gamma||^2 in L^2.
  double l2_norm_squared() const;

  // Raw parameters, for serialization.
  double amplitude() const { return amplitude_; }
  double width() const { return width_; }
  double center() const { return center_; }
  double rel_amplitude() const { return rel_amplitude_; }
  int mode() const { return mode_; }
  double period() const { return period_; }
  const std::vector<double>& samples_s() const { return table_s_; }
  const std::vector<double>& samples_gamma() const { return table_g_; }

 private:
  double unscaled(double s) const;
  double unscaled_derivative(double s) const;

  ProfileKind kind_ = ProfileKind::zero;
  double scale_ = 1.0;
  Interval support_{0.0, 0.0};
  double amplitude_ = 0.0;
  double width_ = 1.0;
  double center_ = 0.0;
  double rel_amplitude_ = 0.0;
  int mode_ = 0;
  double period_ = 0.0;
  std::vector<double> table_s_;
  std::vector<double> table_g_;
};

/// Sampled planar curve; theta is the tangent angle in radians.
struct PlanarCurve {
  std::vector<double> s;
  std::vector<double> xi;
  std::vector<double> eta;
  std::vector<double> theta;
  double step = 0.0;

  std::size_t size() const { return s.size(); }
};

/// Rebuilds the axis from its curvature. The curve starts at the origin with
/// theta = 0 and turns by theta(s) = -int gamma, so positive curvature turns
/// clockwise. Positions use the trapezoid rule on cos/sin theta (second order);
/// theta itself is integrated with a two-point Gauss rule per step.
PlanarCurve reconstruct_curve(const CurvatureProfile& gamma, Interval s_range, int n);

}  // namespace zzspec

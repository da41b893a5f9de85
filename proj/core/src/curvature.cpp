#include "zzspec/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zzspec/errors.hpp"

namespace zzspec {

namespace {

// exp(-t^2) < 1e-21 beyond this many widths.
constexpr double kGaussianCutoff = 7.0;

}  // namespace

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::zero: return "zero";
    case ProfileKind::constant: return "constant";
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::harmonic: return "harmonic";
    case ProfileKind::tabulated: return "tabulated";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "zero") return ProfileKind::zero;
  if (name == "constant") return ProfileKind::constant;
  if (name == "gaussian") return ProfileKind::gaussian;
  if (name == "harmonic") return ProfileKind::harmonic;
  if (name == "tabulated") return ProfileKind::tabulated;
  throw ConfigError("unknown curvature profile kind '" + name + "'");
}

CurvatureProfile CurvatureProfile::zero() { return {}; }

CurvatureProfile CurvatureProfile::constant(double kappa, Interval support) {
  if (!(support.hi > support.lo)) throw GeometryError("constant curvature needs a nonempty support");
  CurvatureProfile p;
  p.kind_ = ProfileKind::constant;
  p.amplitude_ = kappa;
  p.support_ = support;
  return p;
}

CurvatureProfile CurvatureProfile::gaussian(double amplitude, double width, double center) {
  if (!(width > 0.0)) throw GeometryError("gaussian curvature width must be positive");
  CurvatureProfile p;
  p.kind_ = ProfileKind::gaussian;
  p.amplitude_ = amplitude;
  p.width_ = width;
  p.center_ = center;
  p.support_ = {center - kGaussianCutoff * width, center + kGaussianCutoff * width};
  return p;
}

CurvatureProfile CurvatureProfile::harmonic(double base, double rel_amplitude, int mode,
                                            double period) {
  if (!(period > 0.0)) throw GeometryError("harmonic curvature period must be positive");
  CurvatureProfile p;
  p.kind_ = ProfileKind::harmonic;
  p.amplitude_ = base;
  p.rel_amplitude_ = rel_amplitude;
  p.mode_ = mode;
  p.period_ = period;
  p.support_ = {0.0, period};
  return p;
}

CurvatureProfile CurvatureProfile::tabulated(std::vector<double> s, std::vector<double> gamma) {
  if (s.size() != gamma.size() || s.size() < 2)
    throw GeometryError("tabulated curvature needs at least two (s, gamma) samples");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i] > s[i - 1])) throw GeometryError("tabulated curvature samples must be strictly increasing in s");
  for (double g : gamma)
    if (!std::isfinite(g)) throw GeometryError("tabulated curvature must be bounded");
  CurvatureProfile p;
  p.kind_ = ProfileKind::tabulated;
  p.support_ = {s.front(), s.back()};
  p.table_s_ = std::move(s);
  p.table_g_ = std::move(gamma);
  return p;
}

CurvatureProfile CurvatureProfile::scaled(double beta) const {
  CurvatureProfile p = *this;
  p.scale_ *= beta;
  return p;
}

bool CurvatureProfile::identically_zero() const {
  if (kind_ == ProfileKind::zero || scale_ == 0.0) return true;
  if (kind_ == ProfileKind::tabulated)
    return std::all_of(table_g_.begin(), table_g_.end(), [](double g) { return g == 0.0; });
  if (kind_ == ProfileKind::harmonic) return amplitude_ == 0.0;
  return amplitude_ == 0.0;
}

double CurvatureProfile::unscaled(double s) const {
  if (kind_ == ProfileKind::zero) return 0.0;
  if (s < support_.lo || s > support_.hi) return 0.0;
  switch (kind_) {
    case ProfileKind::constant: return amplitude_;
    case ProfileKind::gaussian: {
      const double t = (s - center_) / width_;
      return amplitude_ * std::exp(-t * t);
    }
    case ProfileKind::harmonic:
      return amplitude_ * (1.0 + rel_amplitude_ * std::cos(2.0 * std::numbers::pi * mode_ * s / period_));
    case ProfileKind::tabulated: {
      const auto it = std::upper_bound(table_s_.begin(), table_s_.end(), s);
      if (it == table_s_.end()) return table_g_.back();
      const std::size_t k = static_cast<std::size_t>(it - table_s_.begin());
      if (k == 0) return table_g_.front();
      const double t = (s - table_s_[k - 1]) / (table_s_[k] - table_s_[k - 1]);
      return (1.0 - t) * table_g_[k - 1] + t * table_g_[k];
    }
    default: return 0.0;
  }
}

double CurvatureProfile::unscaled_derivative(double s) const {
  if (kind_ == ProfileKind::zero) return 0.0;
  if (s < support_.lo || s > support_.hi) return 0.0;
  switch (kind_) {
    case ProfileKind::constant: return 0.0;
    case ProfileKind::gaussian: {
      const double t = (s - center_) / width_;
      return -2.0 * t / width_ * amplitude_ * std::exp(-t * t);
    }
    case ProfileKind::harmonic: {
      const double k = 2.0 * std::numbers::pi * mode_ / period_;
      return -amplitude_ * rel_amplitude_ * k * std::sin(k * s);
    }
    case ProfileKind::tabulated: {
      // Centered difference on the interpolant with half the local sample spacing.
      const auto it = std::upper_bound(table_s_.begin(), table_s_.end(), s);
      std::size_t k = static_cast<std::size_t>(it - table_s_.begin());
      k = std::clamp<std::size_t>(k, 1, table_s_.size() - 1);
      const double ds = 0.5 * (table_s_[k] - table_s_[k - 1]);
      const double lo = std::max(s - 0.5 * ds, support_.lo);
      const double hi = std::min(s + 0.5 * ds, support_.hi);
      return (unscaled(hi) - unscaled(lo)) / (hi - lo);
    }
    default: return 0.0;
  }
}

double CurvatureProfile::operator()(double s) const { return scale_ * unscaled(s); }

double CurvatureProfile::derivative(double s) const { return scale_ * unscaled_derivative(s); }

double CurvatureProfile::sup_norm() const {
  switch (kind_) {
    case ProfileKind::zero: return 0.0;
    case ProfileKind::constant:
    case ProfileKind::gaussian: return std::abs(scale_ * amplitude_);
    case ProfileKind::harmonic:
      return std::abs(scale_ * amplitude_) * (1.0 + std::abs(rel_amplitude_));
    case ProfileKind::tabulated: {
      double m = 0.0;
      for (double g : table_g_) m = std::max(m, std::abs(g));
      return std::abs(scale_) * m;
    }
  }
  return 0.0;
}

double CurvatureProfile::total_turn() const {
  if (identically_zero()) return 0.0;
  switch (kind_) {
    case ProfileKind::constant: return scale_ * amplitude_ * support_.length();
    case ProfileKind::harmonic: return scale_ * amplitude_ * period_;
    case ProfileKind::tabulated: {
      double sum = 0.0;
      for (std::size_t i = 1; i < table_s_.size(); ++i)
        sum += 0.5 * (table_g_[i] + table_g_[i - 1]) * (table_s_[i] - table_s_[i - 1]);
      return scale_ * sum;
    }
    default: return integrate([this](double s) { return (*this)(s); }, support_, 256, 10);
  }
}

double CurvatureProfile::l2_norm_squared() const {
  if (identically_zero()) return 0.0;
  if (kind_ == ProfileKind::tabulated) {
    // Exact for the piecewise-linear interpolant.
    double sum = 0.0;
    for (std::size_t i = 1; i < table_s_.size(); ++i) {
      const double a = table_g_[i - 1], b = table_g_[i];
      sum += (a * a + a * b + b * b) / 3.0 * (table_s_[i] - table_s_[i - 1]);
    }
    return scale_ * scale_ * sum;
  }
  return integrate([this](double s) { const double g = (*this)(s); return g * g; }, support_, 256, 10);
}

PlanarCurve reconstruct_curve(const CurvatureProfile& gamma, Interval s_range, int n) {
  if (n < 2) throw GeometryError("reconstruct_curve needs at least two samples");
  if (!(s_range.hi > s_range.lo)) throw GeometryError("reconstruct_curve: empty arc-length range");
  if (gamma.kind() == ProfileKind::tabulated &&
      (s_range.lo < gamma.support().lo || s_range.hi > gamma.support().hi))
    throw GeometryError("tabulated curvature does not cover the requested arc-length range");

  PlanarCurve c;
  c.step = s_range.length() / (n - 1);
  c.s.resize(n);
  c.xi.resize(n);
  c.eta.resize(n);
  c.theta.resize(n);
  const double g = 1.0 / std::sqrt(3.0);
  c.s[0] = s_range.lo;
  c.theta[0] = 0.0;
  c.xi[0] = 0.0;
  c.eta[0] = 0.0;
  double turn = 0.0;
  for (int i = 1; i < n; ++i) {
    const double a = s_range.lo + (i - 1) * c.step;
    const double b = (i == n - 1) ? s_range.hi : s_range.lo + i * c.step;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    turn += half * (gamma(mid - g * half) + gamma(mid + g * half));
    c.s[i] = b;
    c.theta[i] = -turn;
    c.xi[i] = c.xi[i - 1] + half * (std::cos(c.theta[i - 1]) + std::cos(c.theta[i]));
    c.eta[i] = c.eta[i - 1] + half * (std::sin(c.theta[i - 1]) + std::sin(c.theta[i]));
  }
  return c;
}

}  // namespace zzspec

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zzspec/curvature.hpp"
#include "zzspec/quadrature.hpp"

namespace zzspec {

// ---------------------------------------------------------------------------
// Boundary deformation profiles f(x) for the one-sided deformed strip.

enum class DeformationKind { bump, wavelet, tabulated };

/// Compactly supported profile on [center - halfwidth, center + halfwidth].
///
///   bump:    amplitude * (1 - t^2)^4                 (positive mean)
///   wavelet: amplitude * (1 - t^2)^3 (1 - 9 t^2)     (zero mean: a second derivative)
///
/// with t = (x - center) / halfwidth; tabulated profiles interpolate linearly.
class DeformationProfile {
 public:
  DeformationProfile() = default;

  static DeformationProfile bump(double amplitude, double halfwidth, double center = 0.0);
  static DeformationProfile wavelet(double amplitude, double halfwidth, double center = 0.0);
  static DeformationProfile tabulated(std::vector<double> x, std::vector<double> f);

  DeformationKind kind() const { return kind_; }
  double operator()(double x) const;
  double derivative(double x) const;
  Interval support() const;

  double mean() const;              // <f> = int f dx
  double l2_norm_squared() const;   // ||f||^2
  double derivative_l2_norm_squared() const;  // ||f'||^2
  double sup_norm() const;
  double min_value() const;

  double amplitude() const { return amplitude_; }
  double halfwidth() const { return halfwidth_; }
  double center() const { return center_; }
  const std::vector<double>& samples_x() const { return table_x_; }
  const std::vector<double>& samples_f() const { return table_f_; }

 private:
  DeformationKind kind_ = DeformationKind::bump;
  double amplitude_ = 0.0;
  double halfwidth_ = 1.0;
  double center_ = 0.0;
  std::vector<double> table_x_;
  std::vector<double> table_f_;
};

std::string to_string(DeformationKind kind);

// ---------------------------------------------------------------------------
// Geometry specifications.

struct BentStrip {
  CurvatureProfile curvature;
  double halfwidth = 1.0;
};

struct DeformedStrip {
  double width = 1.0;
  DeformationProfile profile;
  double beta = 0.0;
};

/// Two strips y in (0, d1) and (-d2, 0) separated by a Dirichlet wall on y = 0
/// except for a window |x| < window / 2.
struct CoupledStrips {
  double width_upper = 1.0;
  double width_lower = 1.0;
  double window = 0.0;
};

/// {x, y > 0, min(x, y) < width}.
struct LShape {
  double width = 1.0;
};

/// Two perpendicular strips of equal width crossing at the origin.
struct Cross {
  double width = 1.0;
};

/// Closed strip of halfwidth a over a loop of length L (curvature periodic on [0, L]).
struct LoopStrip {
  CurvatureProfile curvature;
  double length = 1.0;
  double halfwidth = 0.1;
};

enum class SectionShape { rectangle, disc, ellipse, polygon };

struct CrossSection2D {
  SectionShape shape = SectionShape::disc;
  // rectangle: full side lengths (p0, p1); disc: radius p0; ellipse: semi-axes (p0, p1).
  double p0 = 1.0;
  double p1 = 1.0;
  double center_x = 0.0;
  double center_y = 0.0;
  std::vector<std::array<double, 2>> vertices;  // polygon only

  bool contains(double x, double y) const;
  Interval x_extent() const;
  Interval y_extent() const;
  /// True for a disc centred at the twist axis.
  bool centered_disc() const;
};

/// Straight tube with cross section M twisted at constant rate beta (1/length);
/// only the fibre operator at zero quasi-momentum is modelled.
struct TwistedFiber {
  CrossSection2D section;
  double twist_rate = 0.0;
};

using GeometryVariant = std::variant<BentStrip, DeformedStrip, CoupledStrips, LShape, Cross,
                                     LoopStrip, CrossSection2D, TwistedFiber>;

struct DomainSpec {
  GeometryVariant geometry;
  std::string unit = "1";  // informational only
};

std::string geometry_kind(const DomainSpec& spec);
std::string to_string(SectionShape shape);

// ---------------------------------------------------------------------------
// Injectivity of the strip map (s, u) -> x(s, u).

enum class Injectivity { admissible, necessary_violated, self_intersection };

std::string to_string(Injectivity v);

struct InjectivityOptions {
  int samples = 0;        // 0 selects ~16 samples per halfwidth
  bool closed = false;    // loop strips: polylines wrap around
  std::optional<Interval> s_range;
};

Injectivity check_injectivity(const CurvatureProfile& gamma, double halfwidth,
                              const InjectivityOptions& options = {});

/// Brute-force O(n^2) intersection test of two polylines' non-adjacent segments;
/// exposed for tests as an independent route to check_injectivity.
bool polylines_intersect_bruteforce(const std::vector<std::array<double, 2>>& upper,
                                    const std::vector<std::array<double, 2>>& lower, bool closed);

// ---------------------------------------------------------------------------
// Discretizable descriptions.

struct CurvilinearStrip {
  CurvatureProfile curvature;
  double halfwidth = 1.0;
  Interval s_range;
  bool periodic = false;
};

struct Box {
  Interval x;
  Interval y;
};

/// Closed horizontal segment on which the Dirichlet condition holds.
struct HorizontalCut {
  double y = 0.0;
  Interval x;
};

enum Side : int { kWest = 0, kEast = 1, kSouth = 2, kNorth = 3 };

/// Union of open boxes minus Dirichlet cuts, optionally intersected with a
/// curved shape. Bounding-box sides flagged in `neumann` carry a symmetry
/// (Neumann) condition instead of Dirichlet.
struct MaskedRegion {
  Interval x;
  Interval y;
  std::vector<Box> boxes;
  std::vector<HorizontalCut> cuts;
  std::function<bool(double, double)> shape;
  std::array<bool, 4> neumann{false, false, false, false};

  bool inside(double px, double py) const;
  bool on_cut(double px, double py, double tol) const;
};

/// Boundary-fitted strip 0 < y < width + beta f(x) on x in x_range.
struct MappedStrip {
  double width = 1.0;
  DeformationProfile profile;
  double beta = 0.0;
  Interval x_range;
};

/// Disc of the given radius centred at the origin (polar grid).
struct PolarDisc {
  double radius = 1.0;
};

using RegionVariant = std::variant<CurvilinearStrip, MaskedRegion, MappedStrip, PolarDisc>;

struct DiscretizableDomain {
  std::string kind;
  RegionVariant region;
  /// Bottom of the essential spectrum of the Dirichlet Laplacian; empty for
  /// bounded domains and for twisted fibres (computed from the fibre solve).
  std::optional<double> threshold;
  double truncation = 0.0;
  std::optional<double> twist_rate;
  /// Zone holding the perturbation (bend support, window, junction); graded
  /// grids keep their finest spacing there.
  Box core;
  /// Masked regions: which axes carry semi-infinite arms reaching the far
  /// (high) end of the bounding box.
  bool arm_x = false;
  bool arm_y = false;
};

struct BuildOptions {
  /// Truncation length beyond the perturbation; 0 selects 30 * width.
  double truncation = 0.0;
  int injectivity_samples = 0;
};

DiscretizableDomain build_domain(const DomainSpec& spec, const BuildOptions& options = {});

/// pi^2 / width^2 with the width rule for each geometry.
std::optional<double> continuum_threshold(const DomainSpec& spec);

}  // namespace zzspec

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zzspec/eigensolve.hpp"
#include "zzspec/geometry.hpp"

namespace zzspec {

/// Mass m >= 0, speed of light c > 0 and reduced Planck constant hbar > 0.
struct UnitSystem {
  double m = 0.0;
  double c = 1.0;
  double hbar = 1.0;

  void validate() const;
  double rest_energy() const { return m * c * c; }
};

/// Positive Dirac energy hbar c sqrt((m c / hbar)^2 + lambda) for a Dirichlet
/// Laplacian eigenvalue lambda (1/length^2).
double dirac_energy(double lambda, const UnitSystem& units);

/// Relative distance below which clustered eigenvalues are merged.
inline constexpr double kClusterTolerance = 1e-6;
/// Relative distance to the threshold of the near-threshold bucket.
inline constexpr double kNearThreshold = 1e-6;

/// One Laplacian eigenvalue (cluster) and its Dirac pair.
struct DiracPair {
  double laplace = 0.0;
  double plus = 0.0;
  double minus = 0.0;  // exactly -plus
  int laplace_multiplicity = 1;
  int multiplicity = 1;  // r * k
  double residual = 0.0;
};

/// Closed band [lo, hi] on the energy axis; infinite ends are flagged.
struct Band {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_infinite = false;
  bool hi_infinite = false;
};

struct EssentialSpectrum {
  /// Bottom of the essential Laplacian spectrum; empty for bounded domains,
  /// whose essential spectrum is the point m c^2 alone.
  std::optional<double> laplace_threshold;
  std::optional<double> threshold;  // epsilon_t
  std::vector<Band> bands;          // (-inf, -eps_t] and [eps_t, inf)
  double mass_point = 0.0;          // m c^2, an isolated essential point
  std::string mass_point_note;
};

struct DiracSpectrum {
  int dim = 2;
  UnitSystem units;
  EssentialSpectrum essential;
  std::vector<DiracPair> discrete;
  std::vector<DiracPair> near_threshold;
  std::vector<DiracPair> excluded;  // at or above the threshold
};

/// Essential spectrum for a Laplacian threshold (empty: bounded domain).
EssentialSpectrum essential_from_threshold(std::optional<double> laplace_threshold,
                                           const UnitSystem& units);

/// Maps Laplacian eigenvalues to Dirac pairs with multiplicity r k (r = 1 in
/// 2D, 2 in 3D). Clusters closer than kClusterTolerance (relative) count as
/// one eigenvalue of multiplicity k. Throws NumericalError on lambda <= 0.
DiracSpectrum map_spectrum(const EigResult& laplacian, std::optional<double> threshold,
                           const UnitSystem& units, int dim);

/// Essential spectrum of a geometry. Twisted fibres need the bottom of the
/// fibre operator, `fiber_bottom`, from a fibre solve.
EssentialSpectrum essential_bands(const DomainSpec& spec, const UnitSystem& units,
                                  std::optional<double> fiber_bottom = std::nullopt);

/// Geometry kinds recognised by name but outside the modelled set (curved,
/// bulged and Fichera layers as PDE solves) raise OutOfScopeError; unknown
/// names raise ConfigError.
void require_supported_geometry(const std::string& kind);

/// (j_{0,1} / j_{1,1})^2.
double ppw_constant_2d();
/// (pi / j_{3/2,1})^2.
double ppw_constant_3d();

/// Lower bound for the first positive Dirac eigenvalue of a domain with N
/// eigenvalue pairs per sign:
///   dim 2: hbar c sqrt((mc/hbar)^2 + 3^{1-N} b2 (pi / 2a)^2), cross = a
///   dim 3: hbar c sqrt((mc/hbar)^2 + 3^{1-N} b3 mu1),         cross = mu1
double ppw_bound(int dim, double cross, int pairs, const UnitSystem& units);

/// Essential spectrum of the Fichera layer from the L-strip value eps_inf.
EssentialSpectrum fichera_essential(double eps_inf, const UnitSystem& units);

}  // namespace zzspec

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zzspec/asymptotics.hpp"
#include "zzspec/pipeline.hpp"

namespace zzspec {

/// One-parameter sweep of a base geometry.
///   window:     CoupledStrips::window
///   beta:       DeformedStrip::beta, or the bending scale of a BentStrip
///   twist_rate: TwistedFiber::twist_rate
struct SweepSettings {
  std::string parameter;
  std::vector<double> values;      // strictly increasing, at least 4
  double expected_exponent = 0.0;  // 0 skips the power-law fit
  /// > 0: the coarsest spacing becomes value * h_per_value (windows resolved
  /// by a fixed number of cells).
  double h_per_value = 0.0;
  /// Truncation is raised to decay_factor / sqrt(gap) where the bound state
  /// decays slowly; 0 keeps the configured truncation.
  double decay_factor = 8.0;

  void validate() const;
};

struct SweepPoint {
  double x = 0.0;
  std::optional<double> eigenvalue;  // reported (extrapolated when refined)
  std::optional<double> gap;         // threshold - eigenvalue; empty when censored
  std::optional<double> threshold;   // continuum
  std::optional<int> count;          // inertia count on the finest grid
  double truncation = 0.0;
  double h = 0.0;                    // coarsest spacing
  bool censored = false;             // no eigenvalue below the threshold
  std::optional<AsymptoticPrediction> prediction;
  std::optional<double> predicted_gap;  // oracle / series gap where a formula applies
  std::optional<double> literal_gap;    // deformed strip only
  SolveReport solve;
};

struct SweepReport {
  std::string parameter;
  std::string kind;
  std::vector<SweepPoint> points;  // in sweep order
  std::vector<std::size_t> censored;
  std::optional<PowerLawFit> fit;
};

/// Solves every sweep point (largest value first, so each truncation can be
/// sized from the previous gap) and fits gap ~ x^p over the uncensored points.
SweepReport run_sweep(const DomainSpec& base, const SweepSettings& sweep,
                      const SolverSettings& solver, const UnitSystem& units = {});

/// Applies a sweep value to a geometry.
DomainSpec with_parameter(const DomainSpec& base, const std::string& parameter, double value);

// ---------------------------------------------------------------------------

struct LoopCase {
  std::string label;
  double lambda1 = 0.0;        // reported (extrapolated when refined)
  double lambda1_finest = 0.0;
  SolveReport solve;
};

struct LoopComparison {
  double length = 0.0;
  double halfwidth = 0.0;
  LoopCase annulus;
  double annulus_oracle = 0.0;  // Bessel cross-product root
  std::vector<LoopCase> loops;  // harmonic curvature perturbations
  bool annulus_maximal = false;  // every loop strictly below the annulus, per grid and extrapolated
};

/// Closed strips of length L = 2 pi R and halfwidth a: the annulus against
/// curvature 1/R (1 + eps cos(2 pi m s / L)) for each mode m.
LoopComparison compare_loops(double radius, double halfwidth, double eps,
                             const std::vector<int>& modes, const SolverSettings& solver);

// ---------------------------------------------------------------------------

struct FiberCase {
  double twist_rate = 0.0;
  std::vector<double> levels;  // lowest eigenvalue per grid, coarse to fine
  double value = 0.0;          // extrapolated (or finest)
  double error_estimate = 0.0;  // |finest - coarser|
};

struct FiberStudy {
  CrossSection2D section;
  std::vector<FiberCase> cases;
};

/// Bottom of the fibre operator h(0) of a twisted tube for each twist rate.
FiberStudy twisted_fiber_study(const CrossSection2D& section, const std::vector<double>& rates,
                               const SolverSettings& solver);

// ---------------------------------------------------------------------------

struct CoefficientFit {
  std::vector<double> beta;
  std::vector<double> gap;
  LinearFit fit;  // gap / beta^2 = C + D beta
  double mean = 0.0;
};

struct Adjudication {
  CoefficientFit first;
  CoefficientFit second;
  double mean_ratio = 0.0;   // <f2> / <f1>
  double ratio = 0.0;        // C2 / C1
  double ratio_stderr = 0.0;
  double z_linear = 0.0;     // (ratio - mean_ratio) / stderr
  double z_quadratic = 0.0;  // (ratio - mean_ratio^2) / stderr
  std::string verdict;       // "quadratic", "linear" or "undecided"
};

/// Gap coefficients of two deformed strips with means <f> and 2<f>: the
/// ratio C2 / C1 is 2 if the gap is linear in <f> and 4 if quadratic.
Adjudication adjudicate_deformed(const DeformationProfile& f1, const DeformationProfile& f2,
                                 double width, const std::vector<double>& betas,
                                 const SolverSettings& solver);

}  // namespace zzspec

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zzspec/dirac.hpp"
#include "zzspec/discretize.hpp"
#include "zzspec/eigensolve.hpp"
#include "zzspec/geometry.hpp"

namespace zzspec {

/// Solver recipe: grid, truncation, eigenpair count and refinement levels.
struct SolverSettings {
  GridSettings grid;        // grid.h is the coarsest spacing
  double truncation = 0.0;  // S; 0 selects the geometry default
  int k = 1;
  double tol = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  int refine = 0;           // extra grids, each bisecting the previous one
  double gap_guess = 0.0;   // expected distance of the lowest eigenvalue below the threshold
  bool count = true;        // inertia count below the threshold on every grid
  int dim = 2;              // 3 for tube cross sections and fibres

  void validate() const;
};

struct LevelResult {
  EigResult eig;
  std::optional<double> discrete_threshold;
  std::optional<int> count_below_threshold;
  Eigen::Index unknowns = 0;
};

struct SolveReport {
  std::string kind;
  std::vector<LevelResult> levels;  // coarse to fine
  /// Finest-grid result; with two or more levels its `extrapolated` field
  /// holds the Richardson values.
  EigResult best;
  std::optional<double> threshold;  // continuum
  /// threshold - eigenvalue on each level (unbounded domains), and its
  /// extrapolation when there are three levels.
  std::vector<std::vector<double>> gaps;
  std::optional<Extrapolation> gap_extrapolation;
  DiracSpectrum dirac;
  double seconds = 0.0;  // wall time, not part of the deterministic record
};

/// geometry -> grid -> eigensolve (per level) -> extrapolation -> Dirac map.
/// Eigenvalues are classified against the grid's own transverse threshold on
/// a single level and against the continuum threshold once extrapolated;
/// the reported essential bands always use the continuum threshold. For
/// twisted fibres the lowest eigenvalue is the essential threshold itself.
SolveReport solve_domain(const DomainSpec& spec, const SolverSettings& settings,
                         const UnitSystem& units = {});

/// Eigenvalues used for the Dirac map: extrapolated when available.
std::vector<double> reported_eigenvalues(const SolveReport& report);

}  // namespace zzspec

#pragma once

#include <string>
#include <vector>

namespace zzspec {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const;
  int failures() const;
};

struct ValidationOptions {
  /// Negative control: break the symmetry of one assembled matrix before the
  /// symmetry checks run; the suite must then fail.
  bool perturb_symmetry = false;
};

/// Oracle suite: Bessel zeros and PPW constants, interval/rectangle/disc/annulus
/// spectra under refinement (order and extrapolated value), matrix symmetry
/// and positivity of every scheme, inertia counts against computed
/// eigenvalues, and the algebraic identities of the Dirac map.
ValidationReport run_validation(const ValidationOptions& options = {});

}  // namespace zzspec

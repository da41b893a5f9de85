#pragma once

#include "zzspec/assemble.hpp"
#include "zzspec/geometry.hpp"

namespace zzspec {

/// Grid recipe for a discretizable domain. Level-0 axes are built from the
/// spacings below and then bisected `refine` times, so successive levels have
/// an exact spacing ratio of 2 even on graded grids.
struct GridSettings {
  double h = 0.0;            // finest spacing (transverse, and in the core zone)
  double h_along = 0.0;      // spacing along strips in the core zone; 0 selects h
  double grading = 1.0;      // growth ratio of cells outside the core; 1 keeps a uniform grid
  double h_max = 0.0;        // cap on graded cells along arms; 0 selects 16 h
  double h_max_cross = 0.0;  // cap on graded y cells of masked regions; 0 selects h_max
  double margin = 0.0;       // the fine zone extends this far beyond the core
  Sector sector = Sector::full;
  int n_phi = 0;             // polar grids: angular nodes; 0 selects ~2 pi R / h (multiple of 4)
  int refine = 0;
};

/// Assembles the domain's operator with thresholds filled in: the continuum
/// and discrete transverse thresholds for unbounded domains, none for bounded
/// ones and fibre operators. Twisted fibres get the twist term added.
GridOperator discretize(const DiscretizableDomain& domain, const GridSettings& settings);

/// Copy of `settings` with `levels` more bisections.
GridSettings refined(const GridSettings& settings, int levels);

}  // namespace zzspec

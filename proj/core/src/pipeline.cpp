#include "zzspec/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "zzspec/errors.hpp"

namespace zzspec {

void SolverSettings::validate() const {
  if (!(grid.h > 0.0)) throw ConfigError("solver: h must be > 0");
  if (truncation < 0.0) throw ConfigError("solver: truncation S must be >= 0");
  if (k < 1) throw ConfigError("solver: k must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("solver: tol must be > 0");
  if (refine < 0 || refine > 2) throw ConfigError("solver: refine must be 0, 1 or 2");
  if (gap_guess < 0.0) throw ConfigError("solver: gap_guess must be >= 0");
  if (dim != 2 && dim != 3) throw ConfigError("solver: dim must be 2 or 3");
}

namespace {

// Inertia count at the threshold; a pivot that is numerically zero moves the
// shift down by a relative 1e-12.
int count_at(const GridOperator& op, double tau) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      return count_below(op, tau);
    } catch (const SingularShiftError&) {
      tau *= 1.0 - 1e-12;
    }
  }
  throw SingularShiftError("inertia count: singular shift at the threshold");
}

}  // namespace

SolveReport solve_domain(const DomainSpec& spec, const SolverSettings& settings,
                         const UnitSystem& units) {
  settings.validate();
  units.validate();
  const auto t0 = std::chrono::steady_clock::now();
  BuildOptions build;
  build.truncation = settings.truncation;
  const DiscretizableDomain dom = build_domain(spec, build);
  const bool twisted = dom.twist_rate.has_value();

  SolveReport report;
  report.kind = dom.kind;
  for (int level = 0; level <= settings.refine; ++level) {
    const GridOperator op = discretize(dom, refined(settings.grid, level));
    SolveOptions opts;
    opts.k = settings.k;
    opts.tol = settings.tol;
    opts.seed = settings.seed;
    LevelResult lr;
    lr.unknowns = op.size();
    lr.discrete_threshold = op.discrete_threshold;
    if (op.discrete_threshold) {
      const double thr = *op.discrete_threshold;
      const double guess = settings.gap_guess > 0.0 ? settings.gap_guess : 0.05 * thr;
      lr.eig = smallest_eigs_below(op, thr, guess, opts);
      if (settings.count) lr.count_below_threshold = count_at(op, thr);
    } else {
      lr.eig = smallest_eigs(op, opts);
    }
    report.threshold = op.threshold;
    report.levels.push_back(std::move(lr));
  }

  report.best = report.levels.back().eig;
  if (report.levels.size() >= 2) {
    std::vector<std::vector<double>> values;
    std::vector<double> h;
    for (const LevelResult& l : report.levels) {
      values.push_back(l.eig.eigenvalues);
      h.push_back(l.eig.h);
    }
    report.best.extrapolated = richardson(values, h);
  }
  if (report.levels.back().discrete_threshold) {
    std::vector<double> h;
    for (const LevelResult& l : report.levels) {
      std::vector<double> g;
      for (double e : l.eig.eigenvalues) g.push_back(*l.discrete_threshold - e);
      report.gaps.push_back(std::move(g));
      h.push_back(l.eig.h);
    }
    if (report.gaps.size() >= 2) report.gap_extrapolation = richardson(report.gaps, h);
  }

  const std::vector<double> values = reported_eigenvalues(report);
  if (twisted) {
    report.dirac.dim = 3;
    report.dirac.units = units;
    report.dirac.essential = essential_from_threshold(values.front(), units);
  } else {
    EigResult mapped = report.best;
    mapped.eigenvalues = values;
    const std::optional<double> classify =
        report.best.extrapolated ? report.threshold : report.levels.back().discrete_threshold;
    report.dirac = map_spectrum(mapped, classify, units, settings.dim);
    report.dirac.essential = essential_from_threshold(report.threshold, units);
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::vector<double> reported_eigenvalues(const SolveReport& report) {
  if (report.best.extrapolated) return report.best.extrapolated->values;
  return report.best.eigenvalues;
}

}  // namespace zzspec

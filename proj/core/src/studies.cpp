#include "zzspec/studies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zzspec/errors.hpp"
#include "zzspec/oracle.hpp"

namespace zzspec {

void SweepSettings::validate() const {
  if (parameter != "window" && parameter != "beta" && parameter != "twist_rate")
    throw ConfigError("sweep parameter must be window, beta or twist_rate");
  if (values.size() < 4) throw ConfigError("sweep needs at least 4 values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw ConfigError("sweep values must be > 0");
    if (i > 0 && !(values[i] > values[i - 1])) throw ConfigError("sweep values must be sorted");
  }
  if (h_per_value < 0.0 || decay_factor < 0.0 || expected_exponent < 0.0)
    throw ConfigError("sweep settings must be non-negative");
}

DomainSpec with_parameter(const DomainSpec& base, const std::string& parameter, double value) {
  DomainSpec out = base;
  if (parameter == "window") {
    if (auto* g = std::get_if<CoupledStrips>(&out.geometry)) {
      g->window = value;
      return out;
    }
  } else if (parameter == "beta") {
    if (auto* g = std::get_if<DeformedStrip>(&out.geometry)) {
      g->beta = value;
      return out;
    }
    if (auto* g = std::get_if<BentStrip>(&out.geometry)) {
      g->curvature = g->curvature.scaled(value);
      return out;
    }
  } else if (parameter == "twist_rate") {
    if (auto* g = std::get_if<TwistedFiber>(&out.geometry)) {
      g->twist_rate = value;
      return out;
    }
  }
  throw ConfigError("parameter '" + parameter + "' does not apply to " + geometry_kind(base));
}

namespace {

std::optional<double> lowest_gap(const SolveReport& r) {
  if (r.gaps.empty() || r.gaps.back().empty()) return std::nullopt;
  const double finest = r.gaps.back().front();
  if (!(finest > 0.0)) return std::nullopt;
  if (r.gap_extrapolation && !r.gap_extrapolation->flagged.front()) {
    const double ex = r.gap_extrapolation->values.front();
    if (ex > 0.0) return ex;
  }
  return finest;
}

void attach_prediction(SweepPoint& p, const DomainSpec& base, const std::string& parameter) {
  if (parameter != "beta") return;
  if (const auto* g = std::get_if<DeformedStrip>(&base.geometry)) {
    AsymptoticPrediction pr = deformed_strip_prediction(g->profile, g->width, p.x);
    // The critical branch (<f> = 0) has no gap formula, only the beta^4 law.
    if (!pr.has_flag("critical") && g->profile.mean() > 0.0) {
      p.predicted_gap = pr.ingredient("oracle_gap");
      p.literal_gap = pr.ingredient("literal_gap");
    }
    p.prediction = std::move(pr);
  } else if (const auto* g = std::get_if<BentStrip>(&base.geometry)) {
    AsymptoticPrediction pr = bent_strip_series(g->curvature, g->halfwidth, p.x);
    p.predicted_gap = pr.value * pr.value;
    p.prediction = std::move(pr);
  }
}

}  // namespace

SweepReport run_sweep(const DomainSpec& base, const SweepSettings& sweep,
                      const SolverSettings& solver, const UnitSystem& units) {
  sweep.validate();
  SweepReport report;
  report.parameter = sweep.parameter;
  report.kind = geometry_kind(base);
  report.points.resize(sweep.values.size());
  const double exponent = sweep.expected_exponent > 0.0 ? sweep.expected_exponent : 2.0;

  std::optional<double> prev_gap;
  double prev_x = 0.0;
  for (std::size_t n = sweep.values.size(); n-- > 0;) {
    SweepPoint& pt = report.points[n];
    pt.x = sweep.values[n];
    const DomainSpec spec = with_parameter(base, sweep.parameter, pt.x);
    attach_prediction(pt, base, sweep.parameter);
    SolverSettings s = solver;
    if (sweep.h_per_value > 0.0) s.grid.h = pt.x * sweep.h_per_value;
    std::optional<double> guess;
    if (prev_gap) guess = *prev_gap * std::pow(pt.x / prev_x, exponent);
    else if (pt.predicted_gap && *pt.predicted_gap > 0.0) guess = pt.predicted_gap;
    if (guess) s.gap_guess = *guess;
    if (guess && sweep.decay_factor > 0.0)
      s.truncation = std::max(s.truncation, sweep.decay_factor / std::sqrt(*guess));

    for (int attempt = 0;; ++attempt) {
      pt.solve = solve_domain(spec, s, units);
      const std::optional<double> gap = lowest_gap(pt.solve);
      const double used = pt.solve.best.truncation;
      if (sweep.decay_factor <= 0.0 || used <= 0.0 || attempt >= 3) break;
      if (!gap) {
        // No state below the threshold: either censored or pushed up by the
        // truncation walls. Lengthen twice before accepting censoring.
        if (attempt >= 2) break;
        s.truncation = 8.0 * used;
        continue;
      }
      if (sweep.decay_factor / std::sqrt(*gap) > used) {
        // A gap squeezed by a short truncation understates the decay length;
        // grow by at most 8x per attempt.
        s.truncation = std::min(1.25 * sweep.decay_factor / std::sqrt(*gap), 8.0 * used);
        s.gap_guess = *gap;
        continue;
      }
      break;
    }
    pt.truncation = pt.solve.best.truncation;
    pt.h = s.grid.h;
    pt.threshold = pt.solve.threshold;
    pt.count = pt.solve.levels.back().count_below_threshold;
    const std::vector<double> values = reported_eigenvalues(pt.solve);
    pt.eigenvalue = values.front();
    pt.gap = lowest_gap(pt.solve);
    pt.censored = !pt.gap.has_value();
    if (pt.gap) {
      prev_gap = pt.gap;
      prev_x = pt.x;
    }
  }

  std::vector<double> xs, gaps;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const SweepPoint& p = report.points[i];
    if (p.censored) report.censored.push_back(i);
    xs.push_back(p.x);
    gaps.push_back(p.gap.value_or(0.0));
  }
  if (sweep.expected_exponent > 0.0 && report.points.size() - report.censored.size() >= 3)
    report.fit = power_law_fit(xs, gaps, sweep.expected_exponent);
  return report;
}

// ---------------------------------------------------------------------------

LoopComparison compare_loops(double radius, double halfwidth, double eps,
                             const std::vector<int>& modes, const SolverSettings& solver) {
  if (!(radius > halfwidth) || !(halfwidth > 0.0)) throw ConfigError("loops need R > a > 0");
  if (modes.empty()) throw ConfigError("loops need at least one perturbation mode");
  LoopComparison out;
  out.length = 2.0 * std::numbers::pi * radius;
  out.halfwidth = halfwidth;
  SolverSettings s = solver;
  s.k = 1;

  auto run = [&](const CurvatureProfile& gamma, const std::string& label) {
    LoopCase c;
    c.label = label;
    c.solve = solve_domain(DomainSpec{LoopStrip{gamma, out.length, halfwidth}}, s);
    c.lambda1 = reported_eigenvalues(c.solve).front();
    c.lambda1_finest = c.solve.best.eigenvalues.front();
    return c;
  };
  out.annulus = run(CurvatureProfile::constant(1.0 / radius, {0.0, out.length}), "annulus");
  out.annulus_oracle =
      reference_spectrum({ReferenceKind::annulus, radius - halfwidth, radius + halfwidth, 1}).front();
  out.annulus_maximal = true;
  for (int m : modes) {
    LoopCase c = run(CurvatureProfile::harmonic(1.0 / radius, eps, m, out.length),
                     "harmonic m=" + std::to_string(m));
    bool below = c.lambda1 < out.annulus.lambda1;
    for (std::size_t l = 0; l < c.solve.levels.size(); ++l)
      below = below && c.solve.levels[l].eig.eigenvalues.front() <
                           out.annulus.solve.levels[l].eig.eigenvalues.front();
    out.annulus_maximal = out.annulus_maximal && below;
    out.loops.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------

FiberStudy twisted_fiber_study(const CrossSection2D& section, const std::vector<double>& rates,
                               const SolverSettings& solver) {
  if (rates.empty()) throw ConfigError("fibre study needs at least one twist rate");
  FiberStudy out;
  out.section = section;
  SolverSettings s = solver;
  s.dim = 3;
  for (double rate : rates) {
    FiberCase c;
    c.twist_rate = rate;
    const SolveReport r = solve_domain(DomainSpec{TwistedFiber{section, rate}}, s);
    for (const LevelResult& l : r.levels) c.levels.push_back(l.eig.eigenvalues.front());
    c.value = reported_eigenvalues(r).front();
    if (c.levels.size() >= 2)
      c.error_estimate = std::abs(c.levels.back() - c.levels[c.levels.size() - 2]);
    out.cases.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------

Adjudication adjudicate_deformed(const DeformationProfile& f1, const DeformationProfile& f2,
                                 double width, const std::vector<double>& betas,
                                 const SolverSettings& solver) {
  Adjudication out;
  auto fit_one = [&](const DeformationProfile& f) {
    if (!(f.mean() > 0.0)) throw ConfigError("adjudication needs profiles with <f> > 0");
    SweepSettings sw;
    sw.parameter = "beta";
    sw.values = betas;
    sw.expected_exponent = 2.0;
    const SweepReport rep = run_sweep(DomainSpec{DeformedStrip{width, f, betas.front()}}, sw, solver);
    CoefficientFit c;
    c.mean = f.mean();
    std::vector<double> y;
    for (const SweepPoint& p : rep.points) {
      if (p.censored) continue;
      c.beta.push_back(p.x);
      c.gap.push_back(*p.gap);
      y.push_back(*p.gap / (p.x * p.x));
    }
    c.fit = linear_fit(c.beta, y);
    return c;
  };
  out.first = fit_one(f1);
  out.second = fit_one(f2);
  out.mean_ratio = out.second.mean / out.first.mean;
  const double c1 = out.first.fit.intercept, c2 = out.second.fit.intercept;
  out.ratio = c2 / c1;
  out.ratio_stderr = std::abs(out.ratio) * std::hypot(out.first.fit.intercept_stderr / c1,
                                                      out.second.fit.intercept_stderr / c2);
  const double se = std::max(out.ratio_stderr, 1e-300);
  out.z_linear = (out.ratio - out.mean_ratio) / se;
  out.z_quadratic = (out.ratio - out.mean_ratio * out.mean_ratio) / se;
  if (std::abs(out.z_linear) > 3.0 && std::abs(out.z_quadratic) < std::abs(out.z_linear))
    out.verdict = "quadratic";
  else if (std::abs(out.z_quadratic) > 3.0 && std::abs(out.z_linear) < std::abs(out.z_quadratic))
    out.verdict = "linear";
  else
    out.verdict = "undecided";
  return out;
}

}  // namespace zzspec

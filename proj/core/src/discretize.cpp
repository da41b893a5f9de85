#include "zzspec/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zzspec/errors.hpp"

namespace zzspec {

namespace {

Axis refine_times(Axis axis, int levels) {
  for (int l = 0; l < levels; ++l) axis = refine_axis(axis);
  return axis;
}

double cap(const GridSettings& s) { return s.h_max > 0.0 ? s.h_max : 16.0 * s.h; }

// Fine zone widened by the margin and snapped outward to the lattice through 0.
Interval snapped_zone(Interval core, double margin, double h, Interval range) {
  Interval z{std::floor((core.lo - margin) / h + 1e-9) * h, std::ceil((core.hi + margin) / h - 1e-9) * h};
  if (z.hi - z.lo < h) z = {z.lo - h, z.hi + h};
  z.lo = std::max(z.lo, range.lo);
  z.hi = std::min(z.hi, range.hi);
  return z;
}

Axis along_axis(Interval range, Interval core, const GridSettings& s, double h) {
  if (s.grading <= 1.0) return uniform_axis(range, h);
  const Interval zone{std::max(core.lo - s.margin, range.lo), std::min(core.hi + s.margin, range.hi)};
  if (!(zone.hi > zone.lo)) return uniform_axis(range, h);
  return graded_axis(range, zone, h, s.grading, std::max(cap(s), h));
}

GridOperator masked(const DiscretizableDomain& dom, const MaskedRegion& base, const GridSettings& s) {
  MaskedRegion region = apply_sector(base, s.sector);
  const double h = s.h;
  Axis x, y;
  if (s.grading <= 1.0) {
    x = lattice_axis(region.x, h);
    y = lattice_axis(region.y, h);
    region.x = {x.front(), x.back()};
    region.y = {y.front(), y.back()};
  } else {
    const double hx = std::max(cap(s), h);
    const double hy = std::max(s.h_max_cross > 0.0 ? s.h_max_cross : hx, h);
    x = graded_axis(region.x, snapped_zone(dom.core.x, s.margin, h, region.x), h, s.grading, hx);
    y = graded_axis(region.y, snapped_zone(dom.core.y, s.margin, h, region.y), h, s.grading, hy);
  }
  x = refine_times(std::move(x), s.refine);
  y = refine_times(std::move(y), s.refine);
  const double h_ref = h / std::pow(2.0, s.refine);
  GridOperator op = assemble_cartesian(region, x, y, h_ref);
  op.grid.sector = s.sector;
  op.grid.truncation = dom.truncation;
  if (dom.arm_x || dom.arm_y) {
    double cont = 0.0, disc = 0.0;
    bool first = true;
    for (int axis = 0; axis < 2; ++axis) {
      if (!(axis == 0 ? dom.arm_x : dom.arm_y)) continue;
      const ArmThreshold t = arm_threshold(op, axis == 0);
      cont = first ? t.continuum : std::min(cont, t.continuum);
      disc = first ? t.discrete : std::min(disc, t.discrete);
      first = false;
    }
    op.threshold = cont;
    op.discrete_threshold = disc;
  }
  return op;
}

}  // namespace

GridSettings refined(const GridSettings& settings, int levels) {
  GridSettings out = settings;
  out.refine += levels;
  return out;
}

GridOperator discretize(const DiscretizableDomain& domain, const GridSettings& settings) {
  if (!(settings.h > 0.0)) throw ConfigError("grid spacing h must be > 0");
  if (settings.refine < 0) throw ConfigError("refinement level must be >= 0");
  if (settings.grading < 1.0) throw ConfigError("grading ratio must be >= 1");
  const bool masked_region = std::holds_alternative<MaskedRegion>(domain.region);
  if (settings.sector != Sector::full && !masked_region)
    throw ConfigError("symmetry sectors are available for masked regions only");

  const double h = settings.h;
  const double h_along = settings.h_along > 0.0 ? settings.h_along : h;
  const double factor = std::pow(2.0, settings.refine);
  GridOperator op;

  if (const auto* r = std::get_if<CurvilinearStrip>(&domain.region)) {
    Axis s = r->periodic ? uniform_axis(r->s_range, h_along)
                         : along_axis(r->s_range, domain.core.x, settings, h_along);
    Axis u = uniform_axis({-r->halfwidth, r->halfwidth}, h);
    s = refine_times(std::move(s), settings.refine);
    u = refine_times(std::move(u), settings.refine);
    op = assemble_curvilinear(*r, s, u, (u[1] - u[0]));
    if (!r->periodic) op.grid.truncation = domain.truncation;
  } else if (const auto* r = std::get_if<MappedStrip>(&domain.region)) {
    Axis x = along_axis(r->x_range, domain.core.x, settings, h_along);
    Axis eta = uniform_axis({0.0, r->width}, h);
    x = refine_times(std::move(x), settings.refine);
    eta = refine_times(std::move(eta), settings.refine);
    op = assemble_mapped_strip(*r, x, eta, eta[1] - eta[0]);
    op.grid.truncation = domain.truncation;
  } else if (const auto* r = std::get_if<PolarDisc>(&domain.region)) {
    const int n_r = std::max(2, static_cast<int>(std::lround(r->radius / h)));
    int n_phi = settings.n_phi;
    if (n_phi <= 0)
      n_phi = std::max(8, 4 * static_cast<int>(std::lround(2.0 * std::numbers::pi * r->radius / h / 4.0)));
    op = assemble_polar_disc(*r, static_cast<int>(n_r * factor), static_cast<int>(n_phi * factor));
  } else if (const auto* r = std::get_if<MaskedRegion>(&domain.region)) {
    op = masked(domain, *r, settings);
  }
  if (!domain.arm_x && !domain.arm_y && masked_region) {
    op.threshold.reset();
    op.discrete_threshold.reset();
  }
  if (std::holds_alternative<CurvilinearStrip>(domain.region) ||
      std::holds_alternative<MappedStrip>(domain.region)) {
    op.threshold = domain.threshold;
  }
  if (domain.twist_rate) op = assemble_twist_fiber(op, *domain.twist_rate);
  return op;
}

}  // namespace zzspec

#include "zzspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zzspec/errors.hpp"

namespace zzspec {

// ---------------------------------------------------------------------------
// DeformationProfile

DeformationProfile DeformationProfile::bump(double amplitude, double halfwidth, double center) {
  if (!(halfwidth > 0.0)) throw GeometryError("deformation halfwidth must be positive");
  DeformationProfile p;
  p.kind_ = DeformationKind::bump;
  p.amplitude_ = amplitude;
  p.halfwidth_ = halfwidth;
  p.center_ = center;
  return p;
}

DeformationProfile DeformationProfile::wavelet(double amplitude, double halfwidth, double center) {
  DeformationProfile p = bump(amplitude, halfwidth, center);
  p.kind_ = DeformationKind::wavelet;
  return p;
}

DeformationProfile DeformationProfile::tabulated(std::vector<double> x, std::vector<double> f) {
  if (x.size() != f.size() || x.size() < 2)
    throw GeometryError("tabulated deformation needs at least two samples");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw GeometryError("tabulated deformation samples must increase");
  if (f.front() != 0.0 || f.back() != 0.0)
    throw GeometryError("tabulated deformation must vanish at both ends of its support");
  DeformationProfile p;
  p.kind_ = DeformationKind::tabulated;
  p.table_x_ = std::move(x);
  p.table_f_ = std::move(f);
  return p;
}

Interval DeformationProfile::support() const {
  if (kind_ == DeformationKind::tabulated) return {table_x_.front(), table_x_.back()};
  return {center_ - halfwidth_, center_ + halfwidth_};
}

double DeformationProfile::operator()(double x) const {
  const Interval sup = support();
  if (x <= sup.lo || x >= sup.hi) return 0.0;
  if (kind_ == DeformationKind::tabulated) {
    const auto it = std::upper_bound(table_x_.begin(), table_x_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - table_x_.begin());
    const double t = (x - table_x_[k - 1]) / (table_x_[k] - table_x_[k - 1]);
    return (1.0 - t) * table_f_[k - 1] + t * table_f_[k];
  }
  const double t = (x - center_) / halfwidth_;
  const double q = 1.0 - t * t;
  if (kind_ == DeformationKind::bump) return amplitude_ * q * q * q * q;
  return amplitude_ * q * q * q * (1.0 - 9.0 * t * t);
}

double DeformationProfile::derivative(double x) const {
  const Interval sup = support();
  if (x <= sup.lo || x >= sup.hi) return 0.0;
  if (kind_ == DeformationKind::tabulated) {
    const auto it = std::upper_bound(table_x_.begin(), table_x_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - table_x_.begin());
    return (table_f_[k] - table_f_[k - 1]) / (table_x_[k] - table_x_[k - 1]);
  }
  const double t = (x - center_) / halfwidth_;
  const double q = 1.0 - t * t;
  if (kind_ == DeformationKind::bump) return amplitude_ * (-8.0 * t) * q * q * q / halfwidth_;
  return amplitude_ * (-24.0 * t) * q * q * (1.0 - 3.0 * t * t) / halfwidth_;
}

namespace {

double integrate_profile(const DeformationProfile& p, const std::function<double(double)>& f) {
  if (p.kind() == DeformationKind::tabulated) {
    double sum = 0.0;
    const auto& xs = p.samples_x();
    const GaussRule rule = gauss_legendre(4);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double mid = 0.5 * (xs[i] + xs[i - 1]), half = 0.5 * (xs[i] - xs[i - 1]);
      for (int q = 0; q < 4; ++q) sum += half * rule.weights[q] * f(mid + half * rule.nodes[q]);
    }
    return sum;
  }
  return integrate(f, p.support(), 128, 12);
}

}  // namespace

double DeformationProfile::mean() const {
  return integrate_profile(*this, [this](double x) { return (*this)(x); });
}

double DeformationProfile::l2_norm_squared() const {
  return integrate_profile(*this, [this](double x) { const double v = (*this)(x); return v * v; });
}

double DeformationProfile::derivative_l2_norm_squared() const {
  return integrate_profile(*this, [this](double x) { const double v = derivative(x); return v * v; });
}

double DeformationProfile::sup_norm() const {
  if (kind_ == DeformationKind::tabulated) {
    double m = 0.0;
    for (double v : table_f_) m = std::max(m, std::abs(v));
    return m;
  }
  if (kind_ == DeformationKind::bump) return std::abs(amplitude_);
  // wavelet: |f| peaks at t = 0 with value |amplitude|; side lobes are smaller.
  return std::abs(amplitude_);
}

double DeformationProfile::min_value() const {
  if (kind_ == DeformationKind::tabulated)
    return std::min(0.0, *std::min_element(table_f_.begin(), table_f_.end()));
  double m = 0.0;
  const Interval sup = support();
  const int n = 4001;
  for (int i = 0; i < n; ++i) m = std::min(m, (*this)(sup.lo + sup.length() * i / (n - 1)));
  return m;
}

std::string to_string(DeformationKind kind) {
  switch (kind) {
    case DeformationKind::bump: return "bump";
    case DeformationKind::wavelet: return "wavelet";
    case DeformationKind::tabulated: return "tabulated";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Cross sections

bool CrossSection2D::contains(double x, double y) const {
  const double dx = x - center_x, dy = y - center_y;
  switch (shape) {
    case SectionShape::rectangle: return std::abs(dx) < 0.5 * p0 && std::abs(dy) < 0.5 * p1;
    case SectionShape::disc: return dx * dx + dy * dy < p0 * p0;
    case SectionShape::ellipse: return (dx * dx) / (p0 * p0) + (dy * dy) / (p1 * p1) < 1.0;
    case SectionShape::polygon: {
      bool in = false;
      const std::size_t n = vertices.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = vertices[i];
        const auto& b = vertices[j];
        if ((a[1] > y) != (b[1] > y) && x < (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]) + a[0])
          in = !in;
      }
      return in;
    }
  }
  return false;
}

Interval CrossSection2D::x_extent() const {
  switch (shape) {
    case SectionShape::rectangle: return {center_x - 0.5 * p0, center_x + 0.5 * p0};
    case SectionShape::disc: return {center_x - p0, center_x + p0};
    case SectionShape::ellipse: return {center_x - p0, center_x + p0};
    case SectionShape::polygon: {
      Interval e{vertices.front()[0], vertices.front()[0]};
      for (const auto& v : vertices) e = {std::min(e.lo, v[0]), std::max(e.hi, v[0])};
      return e;
    }
  }
  return {};
}

Interval CrossSection2D::y_extent() const {
  switch (shape) {
    case SectionShape::rectangle: return {center_y - 0.5 * p1, center_y + 0.5 * p1};
    case SectionShape::disc: return {center_y - p0, center_y + p0};
    case SectionShape::ellipse: return {center_y - p1, center_y + p1};
    case SectionShape::polygon: {
      Interval e{vertices.front()[1], vertices.front()[1]};
      for (const auto& v : vertices) e = {std::min(e.lo, v[1]), std::max(e.hi, v[1])};
      return e;
    }
  }
  return {};
}

bool CrossSection2D::centered_disc() const {
  return shape == SectionShape::disc && center_x == 0.0 && center_y == 0.0;
}

std::string to_string(SectionShape shape) {
  switch (shape) {
    case SectionShape::rectangle: return "rectangle";
    case SectionShape::disc: return "disc";
    case SectionShape::ellipse: return "ellipse";
    case SectionShape::polygon: return "polygon";
  }
  return "unknown";
}

std::string geometry_kind(const DomainSpec& spec) {
  struct Visitor {
    std::string operator()(const BentStrip&) const { return "bent_strip"; }
    std::string operator()(const DeformedStrip&) const { return "deformed_strip"; }
    std::string operator()(const CoupledStrips&) const { return "coupled_strips"; }
    std::string operator()(const LShape&) const { return "l_shape"; }
    std::string operator()(const Cross&) const { return "cross"; }
    std::string operator()(const LoopStrip&) const { return "loop_strip"; }
    std::string operator()(const CrossSection2D&) const { return "cross_section"; }
    std::string operator()(const TwistedFiber&) const { return "twisted_fiber"; }
  };
  return std::visit(Visitor{}, spec.geometry);
}

// ---------------------------------------------------------------------------
// Injectivity

std::string to_string(Injectivity v) {
  switch (v) {
    case Injectivity::admissible: return "admissible";
    case Injectivity::necessary_violated: return "necessary_violated";
    case Injectivity::self_intersection: return "self_intersection";
  }
  return "unknown";
}

namespace {

using Point = std::array<double, 2>;

double orient(const Point& a, const Point& b, const Point& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

struct Segment {
  Point a, b;
  int line;
  int index;
  double xmin, xmax, ymin, ymax;
};

bool adjacent(const Segment& s, const Segment& t, int count, bool closed) {
  if (s.line != t.line) return false;
  const int d = std::abs(s.index - t.index);
  if (d <= 1) return true;
  return closed && d == count - 1;
}

std::vector<Segment> make_segments(const std::vector<Point>& upper, const std::vector<Point>& lower) {
  std::vector<Segment> segs;
  const std::vector<Point>* lines[2] = {&upper, &lower};
  for (int l = 0; l < 2; ++l) {
    const auto& pts = *lines[l];
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      Segment s{pts[i], pts[i + 1], l, static_cast<int>(i), 0, 0, 0, 0};
      s.xmin = std::min(s.a[0], s.b[0]);
      s.xmax = std::max(s.a[0], s.b[0]);
      s.ymin = std::min(s.a[1], s.b[1]);
      s.ymax = std::max(s.a[1], s.b[1]);
      segs.push_back(s);
    }
  }
  return segs;
}

bool sweep_intersections(std::vector<Segment> segs, int count, bool closed) {
  std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) { return a.xmin < b.xmin; });
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size() && segs[j].xmin <= segs[i].xmax; ++j) {
      if (segs[j].ymin > segs[i].ymax || segs[j].ymax < segs[i].ymin) continue;
      if (adjacent(segs[i], segs[j], count, closed)) continue;
      if (segments_intersect(segs[i].a, segs[i].b, segs[j].a, segs[j].b)) return true;
    }
  }
  return false;
}

// Prepends/appends straight pieces of the given lengths along the end tangents.
void extend_straight(PlanarCurve& c, double before, double after) {
  const double step = c.step;
  const int nb = static_cast<int>(std::ceil(before / step));
  const int na = static_cast<int>(std::ceil(after / step));
  PlanarCurve out;
  out.step = step;
  const double t0 = c.theta.front(), t1 = c.theta.back();
  for (int k = nb; k >= 1; --k) {
    out.s.push_back(c.s.front() - k * step);
    out.xi.push_back(c.xi.front() - k * step * std::cos(t0));
    out.eta.push_back(c.eta.front() - k * step * std::sin(t0));
    out.theta.push_back(t0);
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.s.push_back(c.s[i]);
    out.xi.push_back(c.xi[i]);
    out.eta.push_back(c.eta[i]);
    out.theta.push_back(c.theta[i]);
  }
  for (int k = 1; k <= na; ++k) {
    out.s.push_back(c.s.back() + k * step);
    out.xi.push_back(c.xi.back() + k * step * std::cos(t1));
    out.eta.push_back(c.eta.back() + k * step * std::sin(t1));
    out.theta.push_back(t1);
  }
  c = std::move(out);
}

void offset_polylines(const PlanarCurve& c, double a, std::vector<Point>& upper, std::vector<Point>& lower) {
  upper.resize(c.size());
  lower.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double nx = -std::sin(c.theta[i]), ny = std::cos(c.theta[i]);
    upper[i] = {c.xi[i] + a * nx, c.eta[i] + a * ny};
    lower[i] = {c.xi[i] - a * nx, c.eta[i] - a * ny};
  }
}

}  // namespace

bool polylines_intersect_bruteforce(const std::vector<std::array<double, 2>>& upper,
                                    const std::vector<std::array<double, 2>>& lower, bool closed) {
  const auto segs = make_segments(upper, lower);
  const int count = static_cast<int>(upper.size()) - 1;
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (!adjacent(segs[i], segs[j], count, closed) &&
          segments_intersect(segs[i].a, segs[i].b, segs[j].a, segs[j].b))
        return true;
  return false;
}

Injectivity check_injectivity(const CurvatureProfile& gamma, double halfwidth,
                              const InjectivityOptions& options) {
  if (!(halfwidth > 0.0)) throw GeometryError("strip halfwidth must be positive");
  if (halfwidth * gamma.sup_norm() >= 1.0) return Injectivity::necessary_violated;
  if (gamma.identically_zero()) return Injectivity::admissible;

  Interval range;
  if (options.s_range) {
    range = *options.s_range;
  } else {
    const Interval sup = gamma.support();
    const double ext = sup.length() + 10.0 * halfwidth;
    range = {sup.lo - ext, sup.hi + ext};
  }
  int n = options.samples;
  if (n <= 0) n = static_cast<int>(std::ceil(range.length() / (halfwidth / 16.0))) + 1;
  n = std::clamp(n, 200, 400000);

  PlanarCurve curve;
  if (gamma.kind() == ProfileKind::tabulated && !options.s_range) {
    // Samples only cover the table; gamma vanishes beyond it, so the arms
    // continue as straight lines.
    const Interval table = gamma.support();
    const int inner = std::max(2, static_cast<int>(std::lround(n * table.length() / range.length())));
    curve = reconstruct_curve(gamma, table, inner);
    extend_straight(curve, table.lo - range.lo, range.hi - table.hi);
  } else {
    curve = reconstruct_curve(gamma, range, n);
  }
  std::vector<Point> upper, lower;
  offset_polylines(curve, halfwidth, upper, lower);
  const auto segs = make_segments(upper, lower);
  return sweep_intersections(segs, static_cast<int>(curve.size()) - 1, options.closed)
             ? Injectivity::self_intersection
             : Injectivity::admissible;
}

// ---------------------------------------------------------------------------
// MaskedRegion

bool MaskedRegion::inside(double px, double py) const {
  if (px <= x.lo || px >= x.hi || py <= y.lo || py >= y.hi) {
    // Points on a Neumann side are part of the closed region.
    const bool on_w = neumann[kWest] && px == x.lo, on_e = neumann[kEast] && px == x.hi;
    const bool on_s = neumann[kSouth] && py == y.lo, on_n = neumann[kNorth] && py == y.hi;
    const bool in_x = (px > x.lo && px < x.hi) || on_w || on_e;
    const bool in_y = (py > y.lo && py < y.hi) || on_s || on_n;
    if (!(in_x && in_y)) return false;
  }
  if (shape && !shape(px, py)) return false;
  if (boxes.empty()) return true;
  for (const Box& b : boxes) {
    const bool bx = (px > b.x.lo || (neumann[kWest] && px == x.lo && b.x.lo <= x.lo)) &&
                    (px < b.x.hi || (neumann[kEast] && px == x.hi && b.x.hi >= x.hi));
    const bool by = (py > b.y.lo || (neumann[kSouth] && py == y.lo && b.y.lo <= y.lo)) &&
                    (py < b.y.hi || (neumann[kNorth] && py == y.hi && b.y.hi >= y.hi));
    if (bx && by) return true;
  }
  return false;
}

bool MaskedRegion::on_cut(double px, double py, double tol) const {
  for (const HorizontalCut& c : cuts)
    if (std::abs(py - c.y) <= tol && px >= c.x.lo - tol && px <= c.x.hi + tol) return true;
  return false;
}

// ---------------------------------------------------------------------------
// build_domain

std::optional<double> continuum_threshold(const DomainSpec& spec) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  struct Visitor {
    double pi2;
    std::optional<double> operator()(const BentStrip& g) const { return pi2 / std::pow(2.0 * g.halfwidth, 2); }
    std::optional<double> operator()(const DeformedStrip& g) const { return pi2 / (g.width * g.width); }
    std::optional<double> operator()(const CoupledStrips& g) const {
      const double d = std::max(g.width_upper, g.width_lower);
      return pi2 / (d * d);
    }
    std::optional<double> operator()(const LShape& g) const { return pi2 / (g.width * g.width); }
    std::optional<double> operator()(const Cross& g) const { return pi2 / (g.width * g.width); }
    std::optional<double> operator()(const LoopStrip&) const { return std::nullopt; }
    std::optional<double> operator()(const CrossSection2D&) const { return std::nullopt; }
    std::optional<double> operator()(const TwistedFiber&) const { return std::nullopt; }
  };
  return std::visit(Visitor{pi2}, spec.geometry);
}

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw GeometryError(std::string(what) + " must be positive");
}

MaskedRegion section_region(const CrossSection2D& m) {
  MaskedRegion r;
  r.x = m.x_extent();
  r.y = m.y_extent();
  if (m.shape != SectionShape::rectangle) r.shape = [m](double x, double y) { return m.contains(x, y); };
  return r;
}

void validate_section(const CrossSection2D& m) {
  if (m.shape == SectionShape::polygon) {
    if (m.vertices.size() < 3) throw GeometryError("polygon cross section needs at least three vertices");
  } else {
    require_positive(m.p0, "cross-section size");
    if (m.shape != SectionShape::disc) require_positive(m.p1, "cross-section size");
  }
}

}  // namespace

DiscretizableDomain build_domain(const DomainSpec& spec, const BuildOptions& options) {
  DiscretizableDomain out;
  out.kind = geometry_kind(spec);
  out.threshold = continuum_threshold(spec);

  if (const auto* g = std::get_if<BentStrip>(&spec.geometry)) {
    require_positive(g->halfwidth, "strip halfwidth");
    const InjectivityOptions inj{options.injectivity_samples, false, std::nullopt};
    const Injectivity v = check_injectivity(g->curvature, g->halfwidth, inj);
    if (v != Injectivity::admissible)
      throw GeometryError("bent strip is not injective: " + to_string(v));
    const double S = options.truncation > 0.0 ? options.truncation : 30.0 * 2.0 * g->halfwidth;
    Interval sup = g->curvature.identically_zero() ? Interval{0.0, 0.0} : g->curvature.support();
    out.region = CurvilinearStrip{g->curvature, g->halfwidth, {sup.lo - S, sup.hi + S}, false};
    out.truncation = S;
    out.core = {sup, {-g->halfwidth, g->halfwidth}};
  } else if (const auto* g = std::get_if<LoopStrip>(&spec.geometry)) {
    require_positive(g->halfwidth, "loop halfwidth");
    require_positive(g->length, "loop length");
    const Interval sup = g->curvature.support();
    if (sup.lo > 1e-12 || sup.hi < g->length - 1e-12)
      throw GeometryError("loop curvature must cover [0, L]");
    const double turn = integrate([&](double s) { return g->curvature(s); }, {0.0, g->length}, 512, 10);
    const double two_pi = 2.0 * std::numbers::pi;
    if (std::abs(std::abs(turn) - two_pi) > 1e-8 * two_pi)
      throw GeometryError("loop curvature does not close the tangent (int gamma != +-2 pi)");
    const InjectivityOptions inj{options.injectivity_samples, true, Interval{0.0, g->length}};
    const Injectivity v = check_injectivity(g->curvature, g->halfwidth, inj);
    if (v != Injectivity::admissible)
      throw GeometryError("loop strip is not injective: " + to_string(v));
    out.region = CurvilinearStrip{g->curvature, g->halfwidth, {0.0, g->length}, true};
  } else if (const auto* g = std::get_if<DeformedStrip>(&spec.geometry)) {
    require_positive(g->width, "strip width");
    if (g->beta < 0.0) throw GeometryError("deformation parameter beta must be >= 0");
    if (g->width + g->beta * g->profile.min_value() <= 0.0)
      throw GeometryError("deformed strip pinches off (d + beta f <= 0)");
    const double S = options.truncation > 0.0 ? options.truncation : 30.0 * g->width;
    const Interval sup = g->profile.support();
    out.region = MappedStrip{g->width, g->profile, g->beta, {sup.lo - S, sup.hi + S}};
    out.truncation = S;
    out.core = {sup, {0.0, g->width}};
  } else if (const auto* g = std::get_if<CoupledStrips>(&spec.geometry)) {
    require_positive(g->width_upper, "upper strip width");
    require_positive(g->width_lower, "lower strip width");
    if (g->window < 0.0) throw GeometryError("window width must be >= 0");
    const double d = std::max(g->width_upper, g->width_lower);
    const double S = options.truncation > 0.0 ? options.truncation : 30.0 * d;
    const double X = 0.5 * g->window + S;
    MaskedRegion r;
    r.x = {-X, X};
    r.y = {-g->width_lower, g->width_upper};
    r.boxes.push_back({r.x, r.y});
    r.cuts.push_back({0.0, {-X, -0.5 * g->window}});
    r.cuts.push_back({0.0, {0.5 * g->window, X}});
    out.region = r;
    out.truncation = S;
    out.core = {{-0.5 * g->window, 0.5 * g->window}, {0.0, 0.0}};
    out.arm_x = true;
  } else if (const auto* g = std::get_if<LShape>(&spec.geometry)) {
    require_positive(g->width, "L-shape width");
    const double S = options.truncation > 0.0 ? options.truncation : 30.0 * g->width;
    if (S <= g->width) throw GeometryError("L-shape truncation must exceed the arm width");
    MaskedRegion r;
    r.x = {0.0, S};
    r.y = {0.0, S};
    r.boxes.push_back({{0.0, S}, {0.0, g->width}});
    r.boxes.push_back({{0.0, g->width}, {0.0, S}});
    out.region = r;
    out.truncation = S;
    out.core = {{0.0, g->width}, {0.0, g->width}};
    out.arm_x = out.arm_y = true;
  } else if (const auto* g = std::get_if<Cross>(&spec.geometry)) {
    require_positive(g->width, "cross width");
    const double S = options.truncation > 0.0 ? options.truncation : 30.0 * g->width;
    if (S <= 0.5 * g->width) throw GeometryError("cross truncation must exceed the half width");
    const double h = 0.5 * g->width;
    MaskedRegion r;
    r.x = {-S, S};
    r.y = {-S, S};
    r.boxes.push_back({{-S, S}, {-h, h}});
    r.boxes.push_back({{-h, h}, {-S, S}});
    out.region = r;
    out.truncation = S;
    out.core = {{-h, h}, {-h, h}};
    out.arm_x = out.arm_y = true;
  } else if (const auto* g = std::get_if<CrossSection2D>(&spec.geometry)) {
    validate_section(*g);
    if (g->centered_disc()) out.region = PolarDisc{g->p0};
    else out.region = section_region(*g);
  } else if (const auto* g = std::get_if<TwistedFiber>(&spec.geometry)) {
    validate_section(g->section);
    if (g->twist_rate < 0.0) throw GeometryError("twist rate must be >= 0");
    if (g->section.centered_disc()) out.region = PolarDisc{g->section.p0};
    else out.region = section_region(g->section);
    out.twist_rate = g->twist_rate;
  }
  return out;
}

}  // namespace zzspec

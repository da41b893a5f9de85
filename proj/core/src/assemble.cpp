#include "zzspec/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "zzspec/errors.hpp"

namespace zzspec {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::curvilinear: return "curvilinear";
    case Scheme::cartesian: return "cartesian";
    case Scheme::mapped: return "mapped";
    case Scheme::polar: return "polar";
  }
  return "unknown";
}

std::string to_string(Sector sector) {
  switch (sector) {
    case Sector::full: return "full";
    case Sector::ee: return "ee";
    case Sector::eo: return "eo";
    case Sector::oe: return "oe";
    case Sector::oo: return "oo";
  }
  return "unknown";
}

Sector sector_from_string(const std::string& name) {
  if (name == "full") return Sector::full;
  if (name == "ee") return Sector::ee;
  if (name == "eo") return Sector::eo;
  if (name == "oe") return Sector::oe;
  if (name == "oo") return Sector::oo;
  throw ConfigError("unknown symmetry sector '" + name + "' (expected full|ee|eo|oe|oo)");
}

namespace {

using Triplet = Eigen::Triplet<double, int>;

// Accumulates the lower triangle only; the full matrix is its mirror, so the
// result is bitwise symmetric.
class SymmetricBuilder {
 public:
  explicit SymmetricBuilder(int n) : n_(n) {}

  void add(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    entries_.emplace_back(i, j, v);
  }

  // Energy c (psi_i - psi_j)^2; a negative index is a Dirichlet node.
  void edge(int i, int j, double c) {
    if (i >= 0) add(i, i, c);
    if (j >= 0) add(j, j, c);
    if (i >= 0 && j >= 0) add(i, j, -c);
  }

  SparseMatrix build(double scale) const {
    SparseMatrix lower(n_, n_);
    lower.setFromTriplets(entries_.begin(), entries_.end());
    lower *= scale;
    return mirror(lower);
  }

  static SparseMatrix mirror(const SparseMatrix& lower_full) {
    SparseMatrix strict = lower_full.triangularView<Eigen::StrictlyLower>();
    SparseMatrix diag = lower_full.triangularView<Eigen::Lower>();
    diag -= strict;
    diag.prune(0.0);
    SparseMatrix full = strict;
    full += SparseMatrix(strict.transpose());
    full += diag;
    full.makeCompressed();
    return full;
  }

 private:
  int n_;
  std::vector<Triplet> entries_;
};

double dual_width(const Axis& a, std::size_t i) {
  double w = 0.0;
  if (i > 0) w += 0.5 * (a[i] - a[i - 1]);
  if (i + 1 < a.size()) w += 0.5 * (a[i + 1] - a[i]);
  return w;
}

void check_axis(const Axis& a, const char* name) {
  if (a.size() < 3) throw ConfigError(std::string(name) + " axis needs at least 3 nodes");
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i] > a[i - 1])) throw ConfigError(std::string(name) + " axis must be increasing");
}

}  // namespace

Axis lattice_axis(Interval range, double h, double anchor) {
  if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
  const long k0 = std::lround((range.lo - anchor) / h);
  const long k1 = std::lround((range.hi - anchor) / h);
  if (k1 - k0 < 2) throw ConfigError("grid spacing too coarse for the region");
  Axis x(static_cast<std::size_t>(k1 - k0 + 1));
  for (long k = k0; k <= k1; ++k) x[static_cast<std::size_t>(k - k0)] = anchor + static_cast<double>(k) * h;
  return x;
}

double transverse_threshold(const Axis& u, bool neumann_lo, bool neumann_hi) {
  const std::size_t n = u.size();
  if (n < 2) throw ConfigError("transverse axis needs two nodes");
  const std::size_t first = neumann_lo ? 0 : 1;
  const std::size_t last = neumann_hi ? n - 1 : n - 2;
  if (last < first || last >= n) throw ConfigError("transverse axis has no unknowns");
  const std::size_t m = last - first + 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  Eigen::VectorXd off = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m > 1 ? m - 1 : 0));
  Eigen::VectorXd mass(static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = first + r;
    mass[static_cast<Eigen::Index>(r)] = dual_width(u, i);
    if (i > 0) diag[static_cast<Eigen::Index>(r)] += 1.0 / (u[i] - u[i - 1]);
    if (i + 1 < n) diag[static_cast<Eigen::Index>(r)] += 1.0 / (u[i + 1] - u[i]);
    if (r + 1 < m) off[static_cast<Eigen::Index>(r)] = -1.0 / (u[i + 1] - u[i]);
  }
  const Eigen::VectorXd s = mass.cwiseSqrt().cwiseInverse();
  Eigen::VectorXd d = diag.cwiseProduct(s).cwiseProduct(s);
  Eigen::VectorXd e(off.size());
  for (Eigen::Index r = 0; r < off.size(); ++r) e[r] = off[r] * s[r] * s[r + 1];
  if (m == 1) return d[0];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

// ---------------------------------------------------------------------------

GridOperator assemble_curvilinear(const CurvilinearStrip& strip, const Axis& s, const Axis& u,
                                  double h_ref) {
  check_axis(s, "s");
  check_axis(u, "u");
  const double a = strip.halfwidth;
  if (std::abs(u.front() + a) > 1e-12 * a || std::abs(u.back() - a) > 1e-12 * a)
    throw ConfigError("u axis must span [-a, a]");
  if (a * strip.curvature.sup_norm() >= 1.0)
    throw GeometryError("a * sup|gamma| >= 1: strip map is not injective");
  if (!strip.periodic && !strip.curvature.identically_zero()) {
    const Interval sup = strip.curvature.support();
    if (sup.lo < s.front() || sup.hi > s.back())
      throw GeometryError("truncation lies inside the support of the curvature");
  }

  const int ns = static_cast<int>(s.size());
  const int nu = static_cast<int>(u.size());
  const bool per = strip.periodic;
  const int i_first = per ? 0 : 1;
  const int i_last = ns - 2;  // periodic: node ns-1 is node 0
  const int rows = nu - 2;
  auto index = [&](int i, int j) -> int {
    if (j < 1 || j > nu - 2) return -1;
    if (per && i == ns - 1) i = 0;
    if (i < i_first || i > i_last) return -1;
    return (i - i_first) * rows + (j - 1);
  };
  const int n = (i_last - i_first + 1) * rows;

  std::vector<double> gam(static_cast<std::size_t>(ns));
  for (int i = 0; i < ns; ++i) gam[i] = strip.curvature(s[i]);
  auto sqrt_g = [&](int i, int j) { return 1.0 + u[j] * gam[i]; };
  auto ds = [&](int i) {
    if (per && (i == 0 || i == ns - 1)) return 0.5 * (s[1] - s[0] + s[ns - 1] - s[ns - 2]);
    return dual_width(s, static_cast<std::size_t>(i));
  };

  SymmetricBuilder builder(n);
  Eigen::VectorXd mass(n);
  GridOperator op;
  op.grid.node_i.resize(static_cast<std::size_t>(n));
  op.grid.node_j.resize(static_cast<std::size_t>(n));
  for (int i = i_first; i <= i_last; ++i)
    for (int j = 1; j <= nu - 2; ++j) {
      const int p = index(i, j);
      mass[p] = sqrt_g(i, j) * ds(i) * dual_width(u, static_cast<std::size_t>(j));
      op.grid.node_i[p] = i;
      op.grid.node_j[p] = j;
    }
  // s-faces.
  for (int i = 0; i + 1 < ns; ++i)
    for (int j = 1; j <= nu - 2; ++j) {
      const int p = index(i, j), q = index(i + 1, j);
      if (p < 0 && q < 0) continue;
      const double inv = 0.5 * (1.0 / sqrt_g(i, j) + 1.0 / sqrt_g(i + 1, j));
      builder.edge(p, q, inv * dual_width(u, static_cast<std::size_t>(j)) / (s[i + 1] - s[i]));
    }
  // u-faces.
  for (int i = i_first; i <= i_last; ++i)
    for (int j = 0; j + 1 < nu; ++j) {
      const int p = index(i, j), q = index(i, j + 1);
      const double mean = 0.5 * (sqrt_g(i, j) + sqrt_g(i, j + 1));
      builder.edge(p, q, mean * ds(i) / (u[j + 1] - u[j]));
    }

  const double scale = 1.0 / (h_ref * h_ref);
  op.A = builder.build(scale);
  op.B = mass * scale;
  op.grid.scheme = Scheme::curvilinear;
  op.grid.axis0 = s;
  op.grid.axis1 = u;
  op.grid.h_ref = h_ref;
  op.grid.periodic = per;
  if (!per) {
    const double pi = std::numbers::pi;
    op.threshold = pi * pi / (4.0 * a * a);
    op.discrete_threshold = transverse_threshold(u);
    const Interval sup = strip.curvature.identically_zero() ? Interval{0.0, 0.0} : strip.curvature.support();
    op.grid.truncation = std::min(sup.lo - s.front(), s.back() - sup.hi);
  }
  return op;
}

GridOperator assemble_curvilinear(const CurvilinearStrip& strip, double h_s, double h_u) {
  const Axis s = uniform_axis(strip.s_range, h_s);
  const Axis u = uniform_axis({-strip.halfwidth, strip.halfwidth}, h_u);
  return assemble_curvilinear(strip, s, u, h_u);
}

// ---------------------------------------------------------------------------

MaskedRegion apply_sector(const MaskedRegion& region, Sector sector) {
  if (sector == Sector::full) return region;
  const std::string tag = to_string(sector);
  MaskedRegion r = region;
  if (!(region.x.lo < 0.0 && region.x.hi > 0.0 && region.y.lo < 0.0 && region.y.hi > 0.0))
    throw ConfigError("symmetry sectors need a region straddling both axes");
  // Checks reflection symmetry of the mask on a probe lattice.
  const int probes = 97;
  for (int a = 1; a < probes; ++a)
    for (int b = 1; b < probes; ++b) {
      const double px = region.x.lo + (region.x.hi - region.x.lo) * a / probes;
      const double py = region.y.lo + (region.y.hi - region.y.lo) * b / probes;
      const bool in = region.inside(px, py);
      if (in != region.inside(-px, py) || in != region.inside(px, -py))
        throw ConfigError("region is not reflection symmetric; sector '" + tag + "' unavailable");
    }
  r.x.lo = 0.0;
  r.y.lo = 0.0;
  r.neumann[kWest] = tag[0] == 'e';
  r.neumann[kSouth] = tag[1] == 'e';
  return r;
}

GridOperator assemble_cartesian(const MaskedRegion& region, const Axis& x, const Axis& y,
                                double h_ref) {
  check_axis(x, "x");
  check_axis(y, "y");
  const double tol = 1e-9 * h_ref;
  if (std::abs(x.front() - region.x.lo) > tol || std::abs(x.back() - region.x.hi) > tol ||
      std::abs(y.front() - region.y.lo) > tol || std::abs(y.back() - region.y.hi) > tol)
    throw ConfigError("grid axes must span the region's bounding box");

  const int nx = static_cast<int>(x.size());
  const int ny = static_cast<int>(y.size());
  std::vector<int> idx(static_cast<std::size_t>(nx) * ny, -1);
  GridOperator op;
  int n = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double px = (i == 0) ? region.x.lo : (i == nx - 1 ? region.x.hi : x[i]);
      const double py = (j == 0) ? region.y.lo : (j == ny - 1 ? region.y.hi : y[j]);
      if (region.inside(px, py) && !region.on_cut(px, py, tol)) {
        idx[static_cast<std::size_t>(i) * ny + j] = n++;
        op.grid.node_i.push_back(i);
        op.grid.node_j.push_back(j);
      }
    }
  if (n == 0) throw GeometryError("degenerate mask: no interior grid nodes");
  auto at = [&](int i, int j) { return idx[static_cast<std::size_t>(i) * ny + j]; };

  SymmetricBuilder builder(n);
  Eigen::VectorXd mass(n);
  for (int p = 0; p < n; ++p)
    mass[p] = dual_width(x, static_cast<std::size_t>(op.grid.node_i[p])) *
              dual_width(y, static_cast<std::size_t>(op.grid.node_j[p]));
  // Edge length to the Dirichlet point. For a curved shape the point sits on
  // the boundary itself (bisection along the edge), which keeps the scheme
  // symmetric while removing the O(h) staircase shift.
  auto reach = [&](int p, double x0, double y0, double x1, double y1) {
    const double len = std::hypot(x1 - x0, y1 - y0);
    if (!region.shape || p < 0 || region.shape(x1, y1)) return len;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      (region.shape(x0 + mid * (x1 - x0), y0 + mid * (y1 - y0)) ? lo : hi) = mid;
    }
    return std::max(0.5 * (lo + hi), 1e-3) * len;
  };
  for (int i = 0; i + 1 < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const int p = at(i, j), q = at(i + 1, j);
      if (p < 0 && q < 0) continue;
      double len = x[i + 1] - x[i];
      if (q < 0) len = reach(p, x[i], y[j], x[i + 1], y[j]);
      if (p < 0) len = reach(q, x[i + 1], y[j], x[i], y[j]);
      builder.edge(p, q, dual_width(y, static_cast<std::size_t>(j)) / len);
    }
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j + 1 < ny; ++j) {
      const int p = at(i, j), q = at(i, j + 1);
      if (p < 0 && q < 0) continue;
      double len = y[j + 1] - y[j];
      if (q < 0) len = reach(p, x[i], y[j], x[i], y[j + 1]);
      if (p < 0) len = reach(q, x[i], y[j + 1], x[i], y[j]);
      builder.edge(p, q, dual_width(x, static_cast<std::size_t>(i)) / len);
    }

  const double scale = 1.0 / (h_ref * h_ref);
  op.A = builder.build(scale);
  op.B = mass * scale;
  op.grid.scheme = Scheme::cartesian;
  op.grid.axis0 = x;
  op.grid.axis1 = y;
  op.grid.h_ref = h_ref;

  return op;
}

GridOperator assemble_cartesian(const MaskedRegion& region, double h) {
  const Axis x = lattice_axis(region.x, h);
  const Axis y = lattice_axis(region.y, h);
  MaskedRegion r = region;
  r.x = {x.front(), x.back()};
  r.y = {y.front(), y.back()};
  return assemble_cartesian(r, x, y, h);
}

ArmThreshold arm_threshold(const GridOperator& op, bool along_x) {
  if (op.grid.scheme != Scheme::cartesian) throw ConfigError("arm thresholds need a cartesian grid");
  const Axis& along = along_x ? op.grid.axis0 : op.grid.axis1;
  const Axis& across = along_x ? op.grid.axis1 : op.grid.axis0;
  const int na = static_cast<int>(along.size()), nc = static_cast<int>(across.size());
  std::vector<char> mask(static_cast<std::size_t>(nc), 0);
  const int line = na - 2;  // last interior node line of the arm
  for (std::size_t p = 0; p < op.grid.node_i.size(); ++p) {
    const int ia = along_x ? op.grid.node_i[p] : op.grid.node_j[p];
    const int ic = along_x ? op.grid.node_j[p] : op.grid.node_i[p];
    if (ia == line) mask[static_cast<std::size_t>(ic)] = 1;
  }
  ArmThreshold out{-1.0, -1.0};
  const double pi = std::numbers::pi;
  for (int j = 0; j < nc;) {
    if (!mask[static_cast<std::size_t>(j)]) {
      ++j;
      continue;
    }
    int j1 = j;
    while (j1 + 1 < nc && mask[static_cast<std::size_t>(j1 + 1)]) ++j1;
    const bool nlo = j == 0, nhi = j1 == nc - 1;
    const Axis seg(across.begin() + (nlo ? j : j - 1), across.begin() + (nhi ? j1 : j1 + 1) + 1);
    const double w = seg.back() - seg.front();
    if (nlo && nhi) throw GeometryError("arm cross section has no Dirichlet side");
    const double cont = (nlo || nhi) ? pi * pi / (4.0 * w * w) : pi * pi / (w * w);
    const double disc = transverse_threshold(seg, nlo, nhi);
    out.continuum = out.continuum < 0.0 ? cont : std::min(out.continuum, cont);
    out.discrete = out.discrete < 0.0 ? disc : std::min(out.discrete, disc);
    j = j1 + 1;
  }
  if (out.continuum < 0.0) throw GeometryError("arm has no interior nodes at the truncation");
  return out;
}

// ---------------------------------------------------------------------------

GridOperator assemble_mapped_strip(const MappedStrip& strip, const Axis& x, const Axis& eta,
                                   double h_ref) {
  check_axis(x, "x");
  check_axis(eta, "eta");
  const double d = strip.width;
  if (std::abs(eta.front()) > 1e-12 * d || std::abs(eta.back() - d) > 1e-12 * d)
    throw ConfigError("eta axis must span [0, d]");
  const Interval sup = strip.profile.support();
  if (strip.beta != 0.0 && (sup.lo < x.front() || sup.hi > x.back()))
    throw GeometryError("truncation lies inside the support of the deformation");

  const int nx = static_cast<int>(x.size());
  const int ne = static_cast<int>(eta.size());
  const int rows = ne - 2;
  auto index = [&](int i, int j) -> int {
    if (i < 1 || i > nx - 2 || j < 1 || j > ne - 2) return -1;
    return (i - 1) * rows + (j - 1);
  };
  const int n = (nx - 2) * rows;

  std::vector<double> D(static_cast<std::size_t>(nx)), dD(static_cast<std::size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    D[i] = (d + strip.beta * strip.profile(x[i])) / d;
    dD[i] = strip.beta * strip.profile.derivative(x[i]) / d;
    if (!(D[i] > 0.0)) throw GeometryError("deformed strip pinches off (d + beta f <= 0)");
  }

  GridOperator op;
  op.grid.node_i.resize(static_cast<std::size_t>(n));
  op.grid.node_j.resize(static_cast<std::size_t>(n));
  for (int i = 1; i <= nx - 2; ++i)
    for (int j = 1; j <= ne - 2; ++j) {
      op.grid.node_i[index(i, j)] = i;
      op.grid.node_j[index(i, j)] = j;
    }

  SymmetricBuilder builder(n);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(n);
  for (int i = 0; i + 1 < nx; ++i) {
    const double hx = x[i + 1] - x[i];
    for (int j = 0; j + 1 < ne; ++j) {
      const double he = eta[j + 1] - eta[j];
      const double w = 0.25 * hx * he;
      // Local nodes: 0 (i,j), 1 (i+1,j), 2 (i,j+1), 3 (i+1,j+1).
      const int g[4] = {index(i, j), index(i + 1, j), index(i, j + 1), index(i + 1, j + 1)};
      double K[4][4] = {};
      for (int pi = 0; pi < 2; ++pi)
        for (int qi = 0; qi < 2; ++qi) {
          const int ix = i + pi;
          const double c = eta[j + qi] * dD[ix] / D[ix];
          const double m11 = D[ix], m12 = -c * D[ix], m22 = D[ix] * c * c + 1.0 / D[ix];
          double vx[4] = {}, ve[4] = {};
          vx[2 * qi] = -1.0 / hx;
          vx[2 * qi + 1] = 1.0 / hx;
          ve[pi] = -1.0 / he;
          ve[pi + 2] = 1.0 / he;
          for (int r = 0; r < 4; ++r)
            for (int t = 0; t < 4; ++t)
              K[r][t] += w * (m11 * vx[r] * vx[t] + m12 * (vx[r] * ve[t] + ve[r] * vx[t]) + m22 * ve[r] * ve[t]);
          const int corner = g[pi + 2 * qi];
          if (corner >= 0) mass[corner] += w * D[ix];
        }
      for (int r = 0; r < 4; ++r) {
        if (g[r] < 0) continue;
        for (int t = 0; t < 4; ++t) {
          if (g[t] < 0 || K[r][t] == 0.0) continue;
          if (g[r] > g[t] || (r == t)) builder.add(g[r], g[t], K[r][t]);
        }
      }
    }
  }

  const double scale = 1.0 / (h_ref * h_ref);
  op.A = builder.build(scale);
  op.B = mass * scale;
  op.grid.scheme = Scheme::mapped;
  op.grid.axis0 = x;
  op.grid.axis1 = eta;
  op.grid.h_ref = h_ref;
  op.grid.truncation = std::min(sup.lo - x.front(), x.back() - sup.hi);
  const double pi = std::numbers::pi;
  op.threshold = pi * pi / (d * d);
  op.discrete_threshold = transverse_threshold(eta);
  return op;
}

// ---------------------------------------------------------------------------

GridOperator assemble_polar_disc(const PolarDisc& disc, int n_r, int n_phi) {
  if (!(disc.radius > 0.0)) throw GeometryError("disc radius must be positive");
  if (n_r < 2 || n_phi < 4) throw ConfigError("polar grid needs n_r >= 2 and n_phi >= 4");
  const double dr = disc.radius / n_r;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  const int n = 1 + (n_r - 1) * n_phi;
  auto index = [&](int i, int k) -> int {
    if (i == 0) return 0;
    if (i >= n_r) return -1;
    k = ((k % n_phi) + n_phi) % n_phi;
    return 1 + (i - 1) * n_phi + k;
  };

  GridOperator op;
  op.grid.node_i.assign(static_cast<std::size_t>(n), 0);
  op.grid.node_j.assign(static_cast<std::size_t>(n), 0);
  SymmetricBuilder builder(n);
  Eigen::VectorXd mass(n);
  mass[0] = std::numbers::pi * 0.25 * dr * dr;
  for (int k = 0; k < n_phi; ++k) builder.edge(0, index(1, k), 0.5 * dphi);
  for (int i = 1; i < n_r; ++i) {
    const double r = i * dr;
    for (int k = 0; k < n_phi; ++k) {
      const int p = index(i, k);
      op.grid.node_i[p] = i;
      op.grid.node_j[p] = k;
      mass[p] = r * dr * dphi;
      builder.edge(p, index(i + 1, k), (r + 0.5 * dr) * dphi / dr);
      builder.edge(p, index(i, k + 1), dr / (r * dphi));
    }
  }

  const double scale = 1.0 / (dr * dr);
  op.A = builder.build(scale);
  op.B = mass * scale;
  op.grid.scheme = Scheme::polar;
  for (int i = 0; i <= n_r; ++i) op.grid.axis0.push_back(i * dr);
  for (int k = 0; k <= n_phi; ++k) op.grid.axis1.push_back(k * dphi);
  op.grid.h_ref = dr;
  op.grid.periodic = true;
  return op;
}

GridOperator assemble_twist_fiber(const GridOperator& cross_section, double beta) {
  if (beta < 0.0) throw ConfigError("twist rate must be >= 0");
  if (beta == 0.0) return cross_section;
  const GridInfo& g = cross_section.grid;
  if (g.sector != Sector::full) throw ConfigError("twisted fibres are assembled on the full cross section");
  const int n = static_cast<int>(cross_section.size());
  std::vector<Triplet> d_entries;

  if (g.scheme == Scheme::polar) {
    const int n_phi = static_cast<int>(g.axis1.size()) - 1;
    const double dphi = g.axis1[1] - g.axis1[0];
    for (int p = 1; p < n; ++p) {
      const int i = g.node_i[p], k = g.node_j[p];
      const int base = 1 + (i - 1) * n_phi;
      d_entries.emplace_back(p, base + (k + 1) % n_phi, 0.5 / dphi);
      d_entries.emplace_back(p, base + (k + n_phi - 1) % n_phi, -0.5 / dphi);
    }
  } else if (g.scheme == Scheme::cartesian) {
    const Axis& x = g.axis0;
    const Axis& y = g.axis1;
    const int nx = static_cast<int>(x.size()), ny = static_cast<int>(y.size());
    std::vector<int> idx(static_cast<std::size_t>(nx) * ny, -1);
    for (int p = 0; p < n; ++p) idx[static_cast<std::size_t>(g.node_i[p]) * ny + g.node_j[p]] = p;
    auto at = [&](int i, int j) {
      if (i < 0 || j < 0 || i >= nx || j >= ny) return -1;
      return idx[static_cast<std::size_t>(i) * ny + j];
    };
    for (int p = 0; p < n; ++p) {
      const int i = g.node_i[p], j = g.node_j[p];
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1)
        throw ConfigError("twist term needs Dirichlet nodes around the cross section");
      const double cy = x[i] / (y[j + 1] - y[j - 1]);
      const double cx = -y[j] / (x[i + 1] - x[i - 1]);
      if (at(i, j + 1) >= 0) d_entries.emplace_back(p, at(i, j + 1), cy);
      if (at(i, j - 1) >= 0) d_entries.emplace_back(p, at(i, j - 1), -cy);
      if (at(i + 1, j) >= 0) d_entries.emplace_back(p, at(i + 1, j), cx);
      if (at(i - 1, j) >= 0) d_entries.emplace_back(p, at(i - 1, j), -cx);
    }
  } else {
    throw ConfigError("twist term is defined for cartesian and polar cross sections");
  }

  SparseMatrix D(n, n);
  D.setFromTriplets(d_entries.begin(), d_entries.end());
  const SparseMatrix WD = cross_section.B.asDiagonal() * D;
  SparseMatrix twist = SparseMatrix(D.transpose()) * WD;
  GridOperator op = cross_section;
  SparseMatrix sum = cross_section.A + (beta * beta) * twist;
  SparseMatrix lower = sum.triangularView<Eigen::Lower>();
  op.A = SymmetricBuilder::mirror(lower);
  return op;
}

// ---------------------------------------------------------------------------

double symmetry_defect(const SparseMatrix& A) {
  const SparseMatrix diff = A - SparseMatrix(A.transpose());
  double m = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

void perturb_upper_entry(SparseMatrix& A, double delta) {
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (it.row() < it.col()) {
        it.valueRef() += delta;
        return;
      }
  throw ConfigError("matrix has no off-diagonal entry to perturb");
}

void write_matrix_market(const std::string& path, const SparseMatrix& A) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  Eigen::Index nnz = 0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (it.row() >= it.col()) ++nnz;
  out << A.rows() << ' ' << A.cols() << ' ' << nnz << '\n' << std::setprecision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (it.row() >= it.col()) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

void write_matrix_market(const std::string& path, const Eigen::VectorXd& diagonal) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << diagonal.size() << ' ' << diagonal.size() << ' ' << diagonal.size() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < diagonal.size(); ++i) out << i + 1 << ' ' << i + 1 << ' ' << diagonal[i] << '\n';
}

}  // namespace zzspec

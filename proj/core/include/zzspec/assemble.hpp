#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "zzspec/geometry.hpp"
#include "zzspec/grid.hpp"

namespace zzspec {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

enum class Scheme { curvilinear, cartesian, mapped, polar };
std::string to_string(Scheme scheme);

/// Symmetry sector of a reflection-symmetric masked region: first letter for
/// the reflection x -> -x, second for y -> -y; 'e' imposes Neumann and 'o'
/// Dirichlet conditions on the symmetry line.
enum class Sector { full, ee, eo, oe, oo };
std::string to_string(Sector sector);
Sector sector_from_string(const std::string& name);

struct GridInfo {
  Scheme scheme = Scheme::cartesian;
  Axis axis0;  // s, x or r nodes
  Axis axis1;  // u, y, eta or phi nodes
  /// Axis indices of every unknown (polar centre: (0, 0)).
  std::vector<std::int32_t> node_i;
  std::vector<std::int32_t> node_j;
  double h_ref = 1.0;  // normalization length; B = cell area / h_ref^2
  double truncation = 0.0;
  bool periodic = false;
  Sector sector = Sector::full;
};

/// Generalized eigenproblem A x = lambda diag(B) x of a Dirichlet Laplacian.
struct GridOperator {
  SparseMatrix A;  // full symmetric storage, sorted indices
  Eigen::VectorXd B;
  GridInfo grid;
  /// Bottom of the essential spectrum of the continuous problem.
  std::optional<double> threshold;
  /// The same quantity for the grid's own transverse operator; gaps near
  /// the threshold are measured against this value.
  std::optional<double> discrete_threshold;

  Eigen::Index size() const { return B.size(); }
};

/// Curvilinear strip on nodes s x u. The u axis must span [-a, a]; for
/// periodic strips the last s node is identified with the first.
GridOperator assemble_curvilinear(const CurvilinearStrip& strip, const Axis& s, const Axis& u,
                                  double h_ref);
/// Uniform (s, u) grid with spacings h_s, h_u; S is the truncation beyond the
/// support of the curvature.
GridOperator assemble_curvilinear(const CurvilinearStrip& strip, double h_s, double h_u);

/// Five-point finite volumes on the tensor grid x * y restricted to the region.
GridOperator assemble_cartesian(const MaskedRegion& region, const Axis& x, const Axis& y,
                                double h_ref);
/// Uniform lattice through the origin with spacing h.
GridOperator assemble_cartesian(const MaskedRegion& region, double h);

/// Boundary-fitted grid y = eta (d + beta f(x)) / d, eta in [0, d].
GridOperator assemble_mapped_strip(const MappedStrip& strip, const Axis& x, const Axis& eta,
                                   double h_ref);

/// Polar finite volumes: radial nodes r_i = i R / n_r, n_phi angular nodes.
GridOperator assemble_polar_disc(const PolarDisc& disc, int n_r, int n_phi);

/// Adds beta^2 D^T W D, D a centred difference for x d/dy - y d/dx (angular
/// derivative about the origin), W the mass weights. beta = 0 returns the
/// operator unchanged.
GridOperator assemble_twist_fiber(const GridOperator& cross_section, double beta);

/// Restricts a reflection-symmetric region to the half/quarter selected by
/// the sector.
MaskedRegion apply_sector(const MaskedRegion& region, Sector sector);

/// Lattice axis with spacing h through `anchor`, end points snapped to it.
Axis lattice_axis(Interval range, double h, double anchor = 0.0);

/// Smallest eigenvalue of the 1D Dirichlet finite-volume operator on the
/// nodes `u` (end nodes Dirichlet unless flagged Neumann).
double transverse_threshold(const Axis& u, bool neumann_lo = false, bool neumann_hi = false);

struct ArmThreshold {
  double continuum;  // pi^2 / w^2 (Dirichlet-Dirichlet) or pi^2 / (2w)^2 (with a symmetry line)
  double discrete;   // same for the 1D finite-volume operator across the arm
};

/// Transverse thresholds of the arm running to the far end of the x axis
/// (along_x) or the y axis, read off the last interior node line.
ArmThreshold arm_threshold(const GridOperator& op, bool along_x);

/// max |A_ij - A_ji|.
double symmetry_defect(const SparseMatrix& A);

/// Removes the coupling of one off-diagonal pair in the upper triangle only;
/// used as a negative control for the symmetry check.
void perturb_upper_entry(SparseMatrix& A, double delta);

/// Matrix Market coordinate export (A as symmetric lower triangle, B as a
/// diagonal matrix).
void write_matrix_market(const std::string& path, const SparseMatrix& A);
void write_matrix_market(const std::string& path, const Eigen::VectorXd& diagonal);

}  // namespace zzspec

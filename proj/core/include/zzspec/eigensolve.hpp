#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "zzspec/assemble.hpp"

namespace zzspec {

/// Default seed of the random starting block.
inline constexpr std::uint64_t kDefaultSeed = 20240917ULL;

struct SolveOptions {
  int k = 1;
  double tol = 1e-8;        // bound on ||A x - lambda B x|| / ||B x||
  double shift = 0.0;       // must lie below the smallest eigenvalue
  std::uint64_t seed = kDefaultSeed;
  int block_size = 0;       // 0: max(2, min(k, 4))
  int basis_size = 0;       // 0: chosen from k and the block size
  int max_restarts = 400;
  bool keep_vectors = false;
};

struct Extrapolation {
  std::vector<double> values;
  std::vector<double> observed_order;  // per eigenvalue; assumed order for two grids
  std::vector<bool> flagged;           // order fit impossible: value left unextrapolated
  std::vector<double> grids;           // h of the grids used, coarse to fine
};

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> residuals;
  int iterations = 0;               // applications of the shifted inverse
  double h = 0.0;
  double truncation = 0.0;
  std::uint64_t seed = kDefaultSeed;
  double shift = 0.0;
  std::optional<Extrapolation> extrapolated;
  Eigen::MatrixXd vectors;          // columns, only when requested
};

/// k smallest generalized eigenpairs by thick-restart block Lanczos applied to
/// B^{1/2} (A - shift B)^{-1} B^{1/2} with a sparse Cholesky factorization.
/// Throws SingularShiftError if the shift is not below the spectrum and
/// NumericalError if the residual contract is not met.
EigResult smallest_eigs(const GridOperator& op, const SolveOptions& options = {});

/// Like smallest_eigs with the shift placed just below `ceiling - gap_guess`
/// and lowered until the factorization is positive definite.
EigResult smallest_eigs_below(const GridOperator& op, double ceiling, double gap_guess,
                              const SolveOptions& options = {});

/// Dense generalized solve, for small problems and as an independent check.
EigResult dense_smallest_eigs(const GridOperator& op, int k);

/// Number of generalized eigenvalues below tau from the inertia of an LDL^T
/// factorization of A - tau B. Throws SingularShiftError on a (near) zero pivot.
int count_below(const GridOperator& op, double tau);

/// True if no LDL^T pivot of A is below -1e-12 ||A||.
bool positive_semidefinite(const GridOperator& op);

/// Richardson extrapolation of per-level value lists, coarse to fine, with
/// spacing ratio 2 (checked when the spacings are positive).
Extrapolation richardson(const std::vector<std::vector<double>>& values,
                         const std::vector<double>& h, double assumed_order = 2.0);

/// Richardson extrapolation over grids with spacing ratio 2. With three grids
/// the order is fitted per eigenvalue; with two, `assumed_order` is used.
EigResult extrapolate(const EigResult& coarse, const EigResult& fine,
                      const EigResult* finest = nullptr, double assumed_order = 2.0);

}  // namespace zzspec

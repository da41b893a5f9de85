#pragma once

#include <Eigen/Core>

#include "zzspec/assemble.hpp"

struct cholmod_common_struct;
struct cholmod_factor_struct;

namespace zzspec::detail {

/// Owning wrapper around a CHOLMOD factorization of a symmetric matrix given
/// in full storage (only the lower triangle is read).
class CholmodFactor {
 public:
  enum class Mode { cholesky, ldlt };

  CholmodFactor(const SparseMatrix& A, Mode mode);
  ~CholmodFactor();
  CholmodFactor(const CholmodFactor&) = delete;
  CholmodFactor& operator=(const CholmodFactor&) = delete;

  /// False if the Cholesky factorization met a non-positive pivot, or the
  /// LDL^T factorization a zero pivot.
  bool ok() const { return ok_; }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

  /// Diagonal D of an LDL^T factorization.
  Eigen::VectorXd ldl_diagonal() const;

  long factor_nonzeros() const;

 private:
  cholmod_common_struct* common_ = nullptr;
  cholmod_factor_struct* factor_ = nullptr;
  Mode mode_;
  bool ok_ = false;
};

}  // namespace zzspec::detail

#include "cholmod_factor.hpp"

#include <cholmod.h>

#include "zzspec/errors.hpp"

namespace zzspec::detail {

namespace {

cholmod_sparse view(const SparseMatrix& A) {
  cholmod_sparse s{};
  s.nrow = static_cast<std::size_t>(A.rows());
  s.ncol = static_cast<std::size_t>(A.cols());
  s.nzmax = static_cast<std::size_t>(A.nonZeros());
  s.p = const_cast<int*>(A.outerIndexPtr());
  s.i = const_cast<int*>(A.innerIndexPtr());
  s.x = const_cast<double*>(A.valuePtr());
  s.stype = -1;
  s.itype = CHOLMOD_INT;
  s.xtype = CHOLMOD_REAL;
  s.dtype = CHOLMOD_DOUBLE;
  s.sorted = 1;
  s.packed = 1;
  return s;
}

}  // namespace

CholmodFactor::CholmodFactor(const SparseMatrix& A, Mode mode) : mode_(mode) {
  if (!A.isCompressed()) throw NumericalError("CHOLMOD needs a compressed matrix");
  common_ = new cholmod_common;
  cholmod_start(common_);
  common_->print = 0;
  common_->error_handler = nullptr;
  // Simplicial factorizations only: they never call BLAS, which keeps the
  // results independent of the BLAS build and its CPU dispatch.
  common_->supernodal = CHOLMOD_SIMPLICIAL;
  common_->final_ll = mode == Mode::cholesky ? 1 : 0;
  cholmod_sparse a = view(A);
  factor_ = cholmod_analyze(&a, common_);
  if (!factor_) throw NumericalError("CHOLMOD analysis failed");
  cholmod_factorize(&a, factor_, common_);
  ok_ = common_->status == CHOLMOD_OK && factor_->minor == factor_->n;
  if (common_->status < CHOLMOD_OK) throw NumericalError("CHOLMOD factorization failed (out of memory?)");
}

CholmodFactor::~CholmodFactor() {
  if (factor_) cholmod_free_factor(&factor_, common_);
  if (common_) {
    cholmod_finish(common_);
    delete common_;
  }
}

Eigen::MatrixXd CholmodFactor::solve(const Eigen::MatrixXd& rhs) const {
  if (!ok_) throw NumericalError("solve with a failed factorization");
  cholmod_dense b{};
  b.nrow = static_cast<std::size_t>(rhs.rows());
  b.ncol = static_cast<std::size_t>(rhs.cols());
  b.nzmax = b.nrow * b.ncol;
  b.d = b.nrow;
  b.x = const_cast<double*>(rhs.data());
  b.xtype = CHOLMOD_REAL;
  b.dtype = CHOLMOD_DOUBLE;
  cholmod_dense* x = cholmod_solve(CHOLMOD_A, factor_, &b, common_);
  if (!x) throw NumericalError("CHOLMOD solve failed");
  Eigen::MatrixXd out = Eigen::Map<const Eigen::MatrixXd>(static_cast<const double*>(x->x), rhs.rows(), rhs.cols());
  cholmod_free_dense(&x, common_);
  return out;
}

Eigen::VectorXd CholmodFactor::ldl_diagonal() const {
  if (mode_ != Mode::ldlt || factor_->is_super || factor_->is_ll)
    throw NumericalError("LDL^T diagonal requested from a Cholesky factor");
  const auto* p = static_cast<const int*>(factor_->p);
  const auto* x = static_cast<const double*>(factor_->x);
  Eigen::VectorXd d(static_cast<Eigen::Index>(factor_->n));
  for (std::size_t j = 0; j < factor_->n; ++j) d[static_cast<Eigen::Index>(j)] = x[p[j]];
  return d;
}

long CholmodFactor::factor_nonzeros() const {
  return static_cast<long>(common_->lnz);
}

}  // namespace zzspec::detail

#include "zzspec/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "cholmod_factor.hpp"
#include "zzspec/errors.hpp"

namespace zzspec {

namespace {

using detail::CholmodFactor;

SparseMatrix shifted(const GridOperator& op, double sigma) {
  SparseMatrix K = op.A;
  if (sigma != 0.0)
    for (Eigen::Index i = 0; i < op.size(); ++i) K.coeffRef(i, i) -= sigma * op.B[i];
  K.makeCompressed();
  return K;
}

// Rayleigh quotient and residual ||A x - lambda B x|| / ||B x|| of a column.
std::pair<double, double> rayleigh(const GridOperator& op, const Eigen::VectorXd& x) {
  const Eigen::VectorXd ax = op.A * x;
  const Eigen::VectorXd bx = op.B.cwiseProduct(x);
  const double lambda = x.dot(ax) / x.dot(bx);
  return {lambda, (ax - lambda * bx).norm() / bx.norm()};
}

void fill_provenance(EigResult& r, const GridOperator& op) {
  r.h = op.grid.h_ref;
  r.truncation = op.grid.truncation;
}

// Orthonormal basis of the columns of W; rank-deficient directions are
// replaced by random vectors orthogonal to `against` and to each other.
Eigen::MatrixXd orthonormalize(Eigen::MatrixXd W, const Eigen::MatrixXd& against, Eigen::MatrixXd& R,
                               std::mt19937_64& rng) {
  const Eigen::Index n = W.rows(), p = W.cols();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(W);
  R = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  const double scale = std::max(R.cwiseAbs().maxCoeff(), 1e-300);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (std::abs(R(i, i)) > 1e-13 * scale) continue;
    Eigen::VectorXd v(n);
    for (Eigen::Index r = 0; r < n; ++r) v[r] = normal(rng);
    for (int pass = 0; pass < 2; ++pass) {
      if (against.cols() > 0) v -= against * (against.transpose() * v);
      for (Eigen::Index c = 0; c < p; ++c)
        if (c != i) v -= Q.col(c) * Q.col(c).dot(v);
    }
    Q.col(i) = v.normalized();
    R.row(i).setZero();
  }
  return Q;
}

}  // namespace

EigResult dense_smallest_eigs(const GridOperator& op, int k) {
  const Eigen::Index n = op.size();
  if (k < 1 || k > n) throw ConfigError("dense solve needs 1 <= k <= dimension");
  const Eigen::MatrixXd A = Eigen::MatrixXd(op.A);
  const Eigen::MatrixXd B = op.B.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
  if (es.info() != Eigen::Success) throw NumericalError("dense generalized eigensolver failed");
  EigResult r;
  fill_provenance(r, op);
  r.vectors = es.eigenvectors().leftCols(k);
  for (int i = 0; i < k; ++i) {
    const auto [lambda, res] = rayleigh(op, r.vectors.col(i));
    r.eigenvalues.push_back(lambda);
    r.residuals.push_back(res);
  }
  return r;
}

EigResult smallest_eigs(const GridOperator& op, const SolveOptions& opt) {
  const Eigen::Index n = op.size();
  const int k = opt.k;
  if (k < 1 || k >= n) throw ConfigError("smallest_eigs needs 1 <= k < dimension");
  if (!(opt.tol > 0.0)) throw ConfigError("residual tolerance must be positive");
  const int p = opt.block_size > 0 ? opt.block_size : std::max(2, std::min(k, 4));
  int m = opt.basis_size > 0 ? opt.basis_size : std::max(3 * k, k + 16);
  m = std::max(m, k + 2 * p);
  m = (m + p - 1) / p * p;

  if (n <= std::max<Eigen::Index>(300, 3 * (m + p))) {
    EigResult r = dense_smallest_eigs(op, k);
    if (!(opt.shift < r.eigenvalues.front()))
      throw SingularShiftError("shift " + std::to_string(opt.shift) + " is not below the smallest eigenvalue");
    r.seed = opt.seed;
    if (!opt.keep_vectors) r.vectors.resize(0, 0);
    return r;
  }

  const CholmodFactor factor(shifted(op, opt.shift), CholmodFactor::Mode::cholesky);
  if (!factor.ok())
    throw SingularShiftError("shift " + std::to_string(opt.shift) + " is not below the smallest eigenvalue");
  const Eigen::VectorXd sb = op.B.cwiseSqrt();
  const Eigen::VectorXd isb = sb.cwiseInverse();
  int solves = 0;
  auto apply = [&](const Eigen::MatrixXd& X) {
    solves += static_cast<int>(X.cols());
    return Eigen::MatrixXd(sb.asDiagonal() * factor.solve(sb.asDiagonal() * X));
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd V(n, m + p);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + p, m + p);
  {
    Eigen::MatrixXd start(n, p);
    for (Eigen::Index c = 0; c < p; ++c)
      for (Eigen::Index r = 0; r < n; ++r) start(r, c) = normal(rng);
    Eigen::MatrixXd R;
    V.leftCols(p) = orthonormalize(start, Eigen::MatrixXd(n, 0), R, rng);
  }
  int ncols = p;
  std::vector<double> best;

  for (int cycle = 0; cycle <= opt.max_restarts; ++cycle) {
    while (ncols < m + p) {
      const int j = ncols - p;
      Eigen::MatrixXd W = apply(V.middleCols(j, p));
      const auto basis = V.leftCols(ncols);
      Eigen::MatrixXd C = basis.transpose() * W;
      W.noalias() -= basis * C;
      const Eigen::MatrixXd C2 = basis.transpose() * W;
      W.noalias() -= basis * C2;
      C += C2;
      H.block(0, j, ncols, p) = C;
      Eigen::MatrixXd R;
      V.middleCols(ncols, p) = orthonormalize(W, basis, R, rng);
      H.block(ncols, j, p, p) = R;
      ncols += p;
    }

    const Eigen::MatrixXd Hm = H.topLeftCorner(m, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Hm + Hm.transpose()));
    const Eigen::VectorXd theta = es.eigenvalues().reverse();
    const Eigen::MatrixXd Y = es.eigenvectors().rowwise().reverse();

    const Eigen::MatrixXd Z = V.leftCols(m) * Y.leftCols(k);
    std::vector<std::pair<double, double>> pairs;
    bool converged = true;
    for (int i = 0; i < k; ++i) {
      pairs.push_back(rayleigh(op, isb.cwiseProduct(Z.col(i))));
      converged = converged && pairs.back().second <= opt.tol;
    }
    best.clear();
    for (const auto& pr : pairs) best.push_back(pr.second);

    if (converged) {
      std::vector<int> order(static_cast<std::size_t>(k));
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return pairs[a].first < pairs[b].first; });
      EigResult r;
      fill_provenance(r, op);
      r.seed = opt.seed;
      r.shift = opt.shift;
      r.iterations = solves;
      if (opt.keep_vectors) r.vectors.resize(n, k);
      for (int i = 0; i < k; ++i) {
        r.eigenvalues.push_back(pairs[order[i]].first);
        r.residuals.push_back(pairs[order[i]].second);
        if (opt.keep_vectors) r.vectors.col(i) = isb.cwiseProduct(Z.col(order[i]));
      }
      return r;
    }

    // Thick restart with the l leading Ritz vectors and the residual block.
    const int l = std::min(m - p, (std::max(k + p, m / 2) + p - 1) / p * p);
    const Eigen::MatrixXd Yl = Y.leftCols(l);
    const Eigen::MatrixXd keep = V.leftCols(m) * Yl;
    const Eigen::MatrixXd next = V.middleCols(m, p);
    const Eigen::MatrixXd coupling = H.block(m, 0, p, m) * Yl;
    H.setZero();
    H.topLeftCorner(l, l) = theta.head(l).asDiagonal();
    H.block(l, 0, p, l) = coupling;
    H.block(0, l, l, p) = coupling.transpose();
    V.leftCols(l) = keep;
    V.middleCols(l, p) = next;
    ncols = l + p;
  }

  std::ostringstream msg;
  msg << "eigensolver did not reach tol " << opt.tol << " after " << opt.max_restarts
      << " restarts; best residuals:";
  for (double r : best) msg << ' ' << r;
  throw NumericalError(msg.str());
}

EigResult smallest_eigs_below(const GridOperator& op, double ceiling, double gap_guess,
                              const SolveOptions& options) {
  if (!(gap_guess > 0.0)) return smallest_eigs(op, options);
  SolveOptions opt = options;
  double offset = 2.0 * gap_guess;
  for (int attempt = 0; attempt < 60; ++attempt) {
    opt.shift = ceiling - offset;
    try {
      return smallest_eigs(op, opt);
    } catch (const SingularShiftError&) {
      offset *= 4.0;
    }
  }
  throw NumericalError("no admissible shift found below the threshold");
}

int count_below(const GridOperator& op, double tau) {
  const CholmodFactor factor(shifted(op, tau), CholmodFactor::Mode::ldlt);
  if (!factor.ok()) throw SingularShiftError("zero pivot in LDL^T of A - tau B; perturb tau");
  const Eigen::VectorXd d = factor.ldl_diagonal();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < op.size(); ++i) scale = std::max(scale, std::abs(op.A.coeff(i, i)));
  int negative = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(std::abs(d[i]) > 1e-14 * scale)) throw SingularShiftError("near-zero pivot in LDL^T; perturb tau");
    if (d[i] < 0.0) ++negative;
  }
  return negative;
}

bool positive_semidefinite(const GridOperator& op) {
  const CholmodFactor factor(op.A, CholmodFactor::Mode::ldlt);
  double norm = 0.0;
  for (int c = 0; c < op.A.outerSize(); ++c) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(op.A, c); it; ++it) col += std::abs(it.value());
    norm = std::max(norm, col);
  }
  if (!factor.ok()) return false;
  const Eigen::VectorXd d = factor.ldl_diagonal();
  return d.minCoeff() >= -1e-12 * norm;
}

Extrapolation richardson(const std::vector<std::vector<double>>& values,
                         const std::vector<double>& h, double assumed_order) {
  if (values.size() < 2 || values.size() > 3 || h.size() != values.size())
    throw ConfigError("extrapolation needs two or three levels");
  const std::size_t k = values[0].size();
  for (const auto& v : values)
    if (v.size() != k) throw ConfigError("extrapolation needs matching eigenvalue counts");
  for (std::size_t l = 1; l < h.size(); ++l)
    if (h[l - 1] > 0.0 && h[l] > 0.0 && std::abs(h[l - 1] / h[l] - 2.0) > 1e-6)
      throw ConfigError("extrapolation needs grid spacing ratio 2");

  Extrapolation ex;
  ex.grids = h;
  const bool three = values.size() == 3;
  for (std::size_t i = 0; i < k; ++i) {
    const double l0 = values[0][i], l1 = values[1][i];
    if (!three) {
      const double f = std::pow(2.0, assumed_order) - 1.0;
      ex.values.push_back(l1 + (l1 - l0) / f);
      ex.observed_order.push_back(assumed_order);
      ex.flagged.push_back(false);
      continue;
    }
    const double l2 = values[2][i];
    const double d1 = l0 - l1, d2 = l1 - l2;
    if (d1 == 0.0 && d2 == 0.0) {
      ex.values.push_back(l2);
      ex.observed_order.push_back(0.0);
      ex.flagged.push_back(false);
      continue;
    }
    // Non-monotone or non-contracting differences: no order can be fitted.
    if (d1 * d2 <= 0.0 || std::abs(d2) >= std::abs(d1)) {
      ex.values.push_back(l2);
      ex.observed_order.push_back(std::nan(""));
      ex.flagged.push_back(true);
      continue;
    }
    const double order = std::log2(d1 / d2);
    ex.values.push_back(l2 - d2 / (std::pow(2.0, order) - 1.0));
    ex.observed_order.push_back(order);
    ex.flagged.push_back(false);
  }
  return ex;
}

EigResult extrapolate(const EigResult& coarse, const EigResult& fine, const EigResult* finest,
                      double assumed_order) {
  std::vector<std::vector<double>> values{coarse.eigenvalues, fine.eigenvalues};
  std::vector<double> h{coarse.h, fine.h};
  if (finest) {
    values.push_back(finest->eigenvalues);
    h.push_back(finest->h);
  }
  EigResult out = finest ? *finest : fine;
  out.extrapolated = richardson(values, h, assumed_order);
  return out;
}

}  // namespace zzspec

#include "twobody/linalg.hpp"

#include "twobody/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <initializer_list>
#include <cmath>
#include <string>
#include <vector>

namespace twobody {

EigenDecomposition eigh(Eigen::MatrixXd matrix) {
  const auto n = static_cast<lapack_int>(matrix.rows());
  if (matrix.cols() != matrix.rows()) throw InvalidArgument("eigh needs a square matrix");
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, matrix.data(), n, w.data());
  if (info != 0) throw LinalgError("dsyevd failed with info = " + std::to_string(info));
  return {std::move(w), std::move(matrix)};
}

Eigen::VectorXd eigvalsh(Eigen::MatrixXd matrix) {
  const auto n = static_cast<lapack_int>(matrix.rows());
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, matrix.data(), n, w.data());
  if (info != 0) throw LinalgError("dsyevd failed with info = " + std::to_string(info));
  return w;
}

Eigen::VectorXd tridiagonal_eigenvalues(Eigen::VectorXd diagonal, Eigen::VectorXd off_diagonal) {
  const auto n = static_cast<lapack_int>(diagonal.size());
  if (off_diagonal.size() + 1 != diagonal.size())
    throw InvalidArgument("tridiagonal: off-diagonal must have n-1 entries");
  if (off_diagonal.size() == 0) off_diagonal.resize(1);
  const lapack_int info =
      LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', n, diagonal.data(), off_diagonal.data(), nullptr, 1);
  if (info != 0) throw LinalgError("dstev failed with info = " + std::to_string(info));
  return diagonal;
}

SpectralBounds estimate_spectral_bounds(const HermitianOperator& op, int iterations,
                                        double margin) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  const int m = static_cast<int>(std::min<Eigen::Index>(iterations, n));

  Eigen::VectorXd start(n);
  for (Eigen::Index k = 0; k < n; ++k) start[k] = 1.0 + 0.5 * std::sin(0.7 * double(k) + 0.3);
  start.normalize();

  const auto& a = op.matrix();
  Eigen::MatrixXd q(n, m);
  Eigen::VectorXd alpha(m), beta(std::max(m - 1, 0));
  q.col(0) = start;
  int used = m;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd w = a * q.col(j);
    alpha[j] = q.col(j).dot(w);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
    if (j + 1 == m) break;
    const double b = w.norm();
    if (b < 1e-12) {
      used = j + 1;
      break;
    }
    beta[j] = b;
    q.col(j + 1) = w / b;
  }
  const Eigen::VectorXd ritz =
      tridiagonal_eigenvalues(alpha.head(used), beta.head(std::max(used - 1, 0)));
  const double lo = ritz.minCoeff();
  const double hi = ritz.maxCoeff();
  const double pad = margin * std::max(hi - lo, 1e-12);
  return {lo - pad, hi + pad};
}

}  // namespace twobody

namespace twobody {

Eigen::VectorXd banded_eigenvalues(const HermitianOperator& op) {
  const auto n = static_cast<lapack_int>(op.dim());
  const auto kd = static_cast<lapack_int>(op.bandwidth());
  Eigen::MatrixXd ab = Eigen::MatrixXd::Zero(kd + 1, n);
  const auto& a = op.matrix();
  for (Eigen::Index r = 0; r < a.outerSize(); ++r)
    for (HermitianOperator::Sparse::InnerIterator it(a, r); it; ++it)
      if (it.row() <= it.col()) ab(kd + it.row() - it.col(), it.col()) = it.value();
  Eigen::VectorXd w(n);
  double z_dummy = 0.0;
  const lapack_int info =
      LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'N', 'U', n, kd, ab.data(), kd + 1, w.data(), &z_dummy, 1);
  if (info != 0) throw LinalgError("dsbevd failed with info = " + std::to_string(info));
  return w;
}

EigenDecomposition windowed_eigenpairs(const HermitianOperator& op, double lower, double upper,
                                       double cluster_gap) {
  const Eigen::VectorXd all = banded_eigenvalues(op);
  std::vector<double> picked;
  for (Eigen::Index k = 0; k < all.size(); ++k)
    if (all[k] >= lower && all[k] <= upper) picked.push_back(all[k]);

  const auto n = static_cast<lapack_int>(op.dim());
  const auto kl = static_cast<lapack_int>(op.bandwidth());
  const lapack_int ldab = 2 * kl + kl + 1;
  const auto& a = op.matrix();
  const double scale = std::max({std::abs(all[0]), std::abs(all[all.size() - 1]), 1.0});

  EigenDecomposition out;
  out.values = Eigen::Map<Eigen::VectorXd>(picked.data(), static_cast<Eigen::Index>(picked.size()));
  out.vectors.resize(n, static_cast<Eigen::Index>(picked.size()));

  Eigen::MatrixXd ab(ldab, n);
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < picked.size(); ++k) {
    const double shift = picked[k] + 1e-12 * scale;
    ab.setZero();
    for (Eigen::Index r = 0; r < a.outerSize(); ++r)
      for (HermitianOperator::Sparse::InnerIterator it(a, r); it; ++it)
        ab(2 * kl + it.row() - it.col(), it.col()) = it.value();
    for (lapack_int j = 0; j < n; ++j) ab(2 * kl, j) -= shift;
    lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, kl, ab.data(), ldab, ipiv.data());
    if (info < 0) throw LinalgError("dgbtrf failed with info = " + std::to_string(info));
    // info > 0 means an exactly singular pivot: the shift is an eigenvalue to
    // working precision; nudge and refactor.
    if (info > 0) {
      for (lapack_int j = 0; j < n; ++j) ab(2 * kl, j) -= 1e-9 * scale;
      info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, kl, ab.data(), ldab, ipiv.data());
      if (info != 0) throw LinalgError("dgbtrf failed with info = " + std::to_string(info));
    }

    Eigen::VectorXd v(n);
    for (lapack_int i = 0; i < n; ++i) v[i] = 1.0 + 0.37 * std::cos(1.3 * double(i) + double(k));
    v.normalize();
    for (int it = 0; it < 3; ++it) {
      info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, kl, 1, ab.data(), ldab, ipiv.data(),
                            v.data(), n);
      if (info != 0) throw LinalgError("dgbtrs failed with info = " + std::to_string(info));
      for (std::size_t p = k; p-- > 0;) {
        if (std::abs(picked[k] - picked[p]) > cluster_gap) break;
        v -= out.vectors.col(static_cast<Eigen::Index>(p)).dot(v) *
             out.vectors.col(static_cast<Eigen::Index>(p));
      }
      v.normalize();
    }
    out.vectors.col(static_cast<Eigen::Index>(k)) = v;
  }
  return out;
}

}  // namespace twobody

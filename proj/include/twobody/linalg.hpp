#pragma once

#include "twobody/hermitian_operator.hpp"

#include <Eigen/Dense>

#include <utility>

namespace twobody {

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal
};

/// Full eigendecomposition of a dense real symmetric matrix (LAPACK dsyevd).
EigenDecomposition eigh(Eigen::MatrixXd matrix);
Eigen::VectorXd eigvalsh(Eigen::MatrixXd matrix);

/// Eigenvalues of a symmetric tridiagonal matrix (LAPACK dstev).
Eigen::VectorXd tridiagonal_eigenvalues(Eigen::VectorXd diagonal, Eigen::VectorXd off_diagonal);

struct SpectralBounds {
  double lower;
  double upper;
};

/// Extremal eigenvalue estimate from a short Lanczos run started at a fixed
/// deterministic vector, widened by `margin` times the estimated width.
SpectralBounds estimate_spectral_bounds(const HermitianOperator& op, int iterations = 60,
                                        double margin = 0.05);

}  // namespace twobody

namespace twobody {

/// All eigenvalues of a banded symmetric operator (LAPACK dsbevd), ascending.
Eigen::VectorXd banded_eigenvalues(const HermitianOperator& op);

/// Eigenpairs with eigenvalue in [lower, upper]: eigenvalues from the banded
/// solver, eigenvectors by shifted inverse iteration on the banded LU, with
/// Gram-Schmidt against neighbours closer than `cluster_gap`.
EigenDecomposition windowed_eigenpairs(const HermitianOperator& op, double lower, double upper,
                                       double cluster_gap = 1e-6);

}  // namespace twobody

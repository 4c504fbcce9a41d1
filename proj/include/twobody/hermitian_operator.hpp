#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <vector>

namespace twobody {

using StateVector = Eigen::VectorXcd;

/// Real symmetric sparse matrix acting on two-boson states.
class HermitianOperator {
 public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  using Triplet = Eigen::Triplet<double>;

  HermitianOperator() = default;
  /// Duplicate triplets are summed.
  HermitianOperator(std::size_t dim, const std::vector<Triplet>& entries);
  static HermitianOperator diagonal(const Eigen::VectorXd& values);
  static HermitianOperator identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  double entry(std::size_t row, std::size_t col) const;
  std::size_t row_nonzeros(std::size_t row) const;
  std::size_t max_row_nonzeros() const;
  bool is_symmetric() const;

  StateVector apply(const StateVector& v) const;
  /// out = A * in without allocation; `out` must not alias `in`.
  void apply_into(const StateVector& in, StateVector& out) const;
  /// Largest |row - col| over stored entries.
  std::size_t bandwidth() const;
  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(matrix_); }
  const Sparse& matrix() const { return matrix_; }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);

 private:
  explicit HermitianOperator(Sparse m) : matrix_(std::move(m)) {}
  Sparse matrix_;
};

}  // namespace twobody

#include "twobody/hermitian_operator.hpp"

#include "twobody/errors.hpp"

#include <algorithm>
#include <complex>
#include <cstdlib>

namespace twobody {

HermitianOperator::HermitianOperator(std::size_t dim, const std::vector<Triplet>& entries) {
  const auto n = static_cast<Eigen::Index>(dim);
  matrix_.resize(n, n);
  matrix_.setFromTriplets(entries.begin(), entries.end());
  matrix_.makeCompressed();
}

HermitianOperator HermitianOperator::diagonal(const Eigen::VectorXd& values) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index k = 0; k < values.size(); ++k)
    if (values[k] != 0.0) t.emplace_back(k, k, values[k]);
  return HermitianOperator(static_cast<std::size_t>(values.size()), t);
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  return diagonal(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim)));
}

StateVector HermitianOperator::apply(const StateVector& v) const {
  StateVector out(v.size());
  apply_into(v, out);
  return out;
}

void HermitianOperator::apply_into(const StateVector& in, StateVector& out) const {
  if (static_cast<std::size_t>(in.size()) != dim())
    throw InvalidArgument("operator/state dimension mismatch");
  out.resize(in.size());
  const auto* outer = matrix_.outerIndexPtr();
  const auto* inner = matrix_.innerIndexPtr();
  const double* val = matrix_.valuePtr();
  for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
    std::complex<double> acc = 0.0;
    for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += val[k] * in[inner[k]];
    out[r] = acc;
  }
}

std::size_t HermitianOperator::bandwidth() const {
  std::size_t b = 0;
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r)
    for (Sparse::InnerIterator it(matrix_, r); it; ++it)
      b = std::max<std::size_t>(b, static_cast<std::size_t>(std::abs(it.col() - it.row())));
  return b;
}

double HermitianOperator::entry(std::size_t row, std::size_t col) const {
  return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

std::size_t HermitianOperator::row_nonzeros(std::size_t row) const {
  std::size_t count = 0;
  for (Sparse::InnerIterator it(matrix_, static_cast<Eigen::Index>(row)); it; ++it)
    if (it.value() != 0.0) ++count;
  return count;
}

std::size_t HermitianOperator::max_row_nonzeros() const {
  std::size_t best = 0;
  for (std::size_t r = 0; r < dim(); ++r) best = std::max(best, row_nonzeros(r));
  return best;
}

bool HermitianOperator::is_symmetric() const {
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r)
    for (Sparse::InnerIterator it(matrix_, r); it; ++it)
      if (matrix_.coeff(it.col(), it.row()) != it.value()) return false;
  return true;
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("operator dimension mismatch in sum");
  HermitianOperator::Sparse sum = a.matrix_ + b.matrix_;
  sum.prune(0.0);
  sum.makeCompressed();
  return HermitianOperator(std::move(sum));
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  HermitianOperator::Sparse scaled = s * a.matrix_;
  scaled.makeCompressed();
  return HermitianOperator(std::move(scaled));
}

}  // namespace twobody

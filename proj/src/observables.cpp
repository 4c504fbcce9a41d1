#include "twobody/observables.hpp"

#include "twobody/errors.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace twobody {

void require_normalized(const StateVector& v, double tol) {
  const double n = v.norm();
  if (std::abs(n - 1.0) > tol)
    throw InvalidArgument("state is not normalized: norm = " + std::to_string(n));
}

double mean_distance(const TwoBosonBasis& basis, const StateVector& state) {
  if (static_cast<std::size_t>(state.size()) != basis.dim())
    throw InvalidArgument("state dimension does not match basis");
  require_normalized(state);
  double r = 0.0;
  for (std::size_t k = 0; k < basis.dim(); ++k)
    r += basis.unrank(k).separation() * std::norm(state[static_cast<Eigen::Index>(k)]);
  return r;
}

double pair_probability_sum(const TwoBosonBasis& basis, const StateVector& state) {
  if (static_cast<std::size_t>(state.size()) != basis.dim())
    throw InvalidArgument("state dimension does not match basis");
  double total = 0.0;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const SitePair p = basis.unrank(k);
    const double w = std::norm(state[static_cast<Eigen::Index>(k)]);
    if (p.doubly_occupied()) {
      const double n = 2.0;
      total += 0.5 * n * (n - 1.0) * w;
    } else {
      total += 1.0 * 1.0 * w;  // n_i n_{i+r}
    }
  }
  return total;
}

double expectation(const HermitianOperator& op, const StateVector& state) {
  if (op.dim() != static_cast<std::size_t>(state.size()))
    throw InvalidArgument("operator and state dimensions differ: " + std::to_string(op.dim()) +
                          " vs " + std::to_string(state.size()));
  require_normalized(state);
  const std::complex<double> q = state.dot(op.apply(state));
  if (std::abs(q.imag()) > 1e-10)
    throw InvalidArgument("quadratic form has imaginary residue " + std::to_string(q.imag()));
  return q.real();
}

}  // namespace twobody

#pragma once

#include "twobody/basis.hpp"
#include "twobody/hermitian_operator.hpp"

namespace twobody {

inline constexpr double kNormTolerance = 1e-10;

/// Throws InvalidArgument if | ||v|| - 1 | exceeds tol.
void require_normalized(const StateVector& v, double tol = kNormTolerance);

/// Mean separation sum_{i, r >= 1} r <n_i n_{i+r}>; a doubly occupied site
/// contributes distance 0.
double mean_distance(const TwoBosonBasis& basis, const StateVector& state);

/// Left-hand side of the two-particle sum rule
/// sum_{i, r >= 1} <n_i n_{i+r}> + 1/2 sum_i <n_i (n_i - 1)>, evaluated from
/// occupation numbers of each configuration.
double pair_probability_sum(const TwoBosonBasis& basis, const StateVector& state);

/// <psi|A|psi> for a normalized state. The imaginary part of the quadratic
/// form must vanish within 1e-10.
double expectation(const HermitianOperator& op, const StateVector& state);

}  // namespace twobody

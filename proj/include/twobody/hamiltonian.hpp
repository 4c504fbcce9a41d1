#pragma once

#include "twobody/basis.hpp"
#include "twobody/hermitian_operator.hpp"
#include "twobody/model.hpp"

namespace twobody {

/// Field-free extended Hubbard Hamiltonian. params.F is ignored. A hop that
/// creates or destroys a doubly occupied site carries sqrt(2) kappa.
HermitianOperator build_h0(const ModelParams& params, const TwoBosonBasis& basis);

/// Diagonal field term F * (i + j) for configuration (i, j). A ring with
/// nonzero field is rejected.
HermitianOperator build_stark(double field, const TwoBosonBasis& basis,
                              Boundary boundary = Boundary::Open);

/// H0 + F sum_j j n_j.
HermitianOperator build_h(const ModelParams& params, const TwoBosonBasis& basis);

}  // namespace twobody

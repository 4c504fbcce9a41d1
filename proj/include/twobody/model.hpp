#pragma once

#include <cstddef>
#include <string_view>

namespace twobody {

enum class Boundary { Open, Ring };

std::string_view to_string(Boundary b);
Boundary boundary_from_string(std::string_view name);

// Parameters of the driven extended Bose-Hubbard chain
//   H = -kappa sum (a_j^+ a_{j+1} + h.c.) + U/2 sum n_j(n_j-1) + V sum n_j n_{j+1} + F sum j n_j
// with sites numbered 1..N.
struct ModelParams {
  std::size_t sites = 111;
  double kappa = 1.0;
  double U = -6.24;
  double V = -6.24;
  double F = 0.0;
  Boundary boundary = Boundary::Open;

  /// Throws InvalidArgument when N < 2, kappa <= 0, or a field is set on a ring.
  void validate() const;
};

}  // namespace twobody

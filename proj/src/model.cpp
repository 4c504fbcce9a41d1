#include "twobody/model.hpp"

#include "twobody/errors.hpp"

#include <string>

namespace twobody {

std::string_view to_string(Boundary b) {
  return b == Boundary::Ring ? "ring" : "open";
}

Boundary boundary_from_string(std::string_view name) {
  if (name == "open") return Boundary::Open;
  if (name == "ring") return Boundary::Ring;
  throw InvalidArgument("unknown boundary '" + std::string(name) + "' (expected open or ring)");
}

void ModelParams::validate() const {
  if (sites < 2) throw InvalidArgument("site count must be at least 2");
  if (!(kappa > 0.0)) throw InvalidArgument("hopping kappa must be positive");
  if (boundary == Boundary::Ring && F != 0.0)
    throw InvalidArgument("a linear field is incompatible with ring boundary");
}

}  // namespace twobody

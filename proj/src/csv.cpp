#include "twobody/csv.hpp"

#include <cstdio>

namespace twobody {

std::string fmt_num(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace twobody

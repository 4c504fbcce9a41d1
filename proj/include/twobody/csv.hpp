#pragma once

#include <string>

namespace twobody {

/// Fixed numeric formatting for every CSV/JSON artifact: 12 significant digits.
std::string fmt_num(double x);

}  // namespace twobody

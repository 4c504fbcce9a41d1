#include "twobody/basis.hpp"

#include "twobody/errors.hpp"

#include <algorithm>
#include <string>

namespace twobody {

TwoBosonBasis::TwoBosonBasis(std::size_t sites) : sites_(sites) {
  if (sites < 2) throw InvalidArgument("two-boson basis needs N >= 2, got " + std::to_string(sites));
  const int n = static_cast<int>(sites);
  pairs_.reserve(dim());
  row_offset_.reserve(sites);
  for (int i = 1; i <= n; ++i) {
    row_offset_.push_back(pairs_.size());
    for (int j = i; j <= n; ++j) pairs_.push_back({i, j});
  }
}

std::size_t TwoBosonBasis::rank(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 1 || j > static_cast<int>(sites_))
    throw InvalidArgument("site index out of range: (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
  return row_offset_[i - 1] + static_cast<std::size_t>(j - i);
}

SitePair TwoBosonBasis::unrank(std::size_t k) const {
  if (k >= pairs_.size()) throw InvalidArgument("basis rank out of range: " + std::to_string(k));
  return pairs_[k];
}

TwoBosonBasis build_basis(std::size_t sites) { return TwoBosonBasis(sites); }

}  // namespace twobody

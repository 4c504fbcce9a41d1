#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace twobody {

/// Occupied sites of a two-boson configuration, 1-based, first <= second.
struct SitePair {
  int first;
  int second;

  int separation() const { return second - first; }
  bool doubly_occupied() const { return first == second; }
  friend bool operator==(const SitePair&, const SitePair&) = default;
};

/// Symmetric two-boson configurations (i <= j) on N sites, ranked
/// lexicographically by (i, j).
class TwoBosonBasis {
 public:
  explicit TwoBosonBasis(std::size_t sites);

  std::size_t sites() const { return sites_; }
  std::size_t dim() const { return sites_ * (sites_ + 1) / 2; }

  /// Closed-form rank; the pair is sorted first so (j, i) and (i, j) agree.
  std::size_t rank(int i, int j) const;
  std::size_t rank(SitePair p) const { return rank(p.first, p.second); }
  SitePair unrank(std::size_t k) const;

  const std::vector<SitePair>& pairs() const { return pairs_; }

 private:
  std::size_t sites_;
  std::vector<SitePair> pairs_;
  std::vector<std::size_t> row_offset_;
};

/// Throws InvalidArgument for N < 2.
TwoBosonBasis build_basis(std::size_t sites);

}  // namespace twobody

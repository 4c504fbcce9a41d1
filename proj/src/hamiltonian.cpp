#include "twobody/hamiltonian.hpp"

#include "twobody/errors.hpp"

#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace twobody {
namespace {

std::vector<std::pair<int, int>> bonds(const ModelParams& params) {
  const int n = static_cast<int>(params.sites);
  std::vector<std::pair<int, int>> out;
  for (int s = 1; s < n; ++s) out.emplace_back(s, s + 1);
  if (params.boundary == Boundary::Ring) out.emplace_back(n, 1);
  return out;
}

int occupation(SitePair p, int site) {
  return (p.first == site ? 1 : 0) + (p.second == site ? 1 : 0);
}

}  // namespace

HermitianOperator build_h0(const ModelParams& params, const TwoBosonBasis& basis) {
  ModelParams checked = params;
  checked.F = 0.0;
  checked.validate();
  if (basis.sites() != params.sites) throw InvalidArgument("basis and model disagree on N");

  const auto bond_list = bonds(params);
  std::vector<HermitianOperator::Triplet> t;
  t.reserve(basis.dim() * 5);

  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const SitePair p = basis.unrank(k);
    double diag = 0.0;
    if (p.doubly_occupied()) diag += params.U;  // U/2 * n(n-1) with n = 2
    for (auto [a, b] : bond_list) diag += params.V * occupation(p, a) * occupation(p, b);
    if (diag != 0.0) t.emplace_back(k, k, diag);

    // a_to^+ a_from on both orientations of every bond.
    for (auto [a, b] : bond_list) {
      for (auto [from, to] : std::array{std::pair{a, b}, std::pair{b, a}}) {
        const int n_from = occupation(p, from);
        if (n_from == 0) continue;
        const int n_to = occupation(p, to);
        SitePair moved = p;
        if (moved.first == from) moved.first = to;
        else moved.second = to;
        const double amp = -params.kappa * std::sqrt(double(n_from) * double(n_to + 1));
        t.emplace_back(basis.rank(moved), k, amp);
      }
    }
  }
  return HermitianOperator(basis.dim(), t);
}

HermitianOperator build_stark(double field, const TwoBosonBasis& basis, Boundary boundary) {
  if (boundary == Boundary::Ring && field != 0.0)
    throw InvalidArgument("a linear field is incompatible with ring boundary");
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const SitePair p = basis.unrank(k);
    d[static_cast<Eigen::Index>(k)] = field * double(p.first + p.second);
  }
  return HermitianOperator::diagonal(d);
}

HermitianOperator build_h(const ModelParams& params, const TwoBosonBasis& basis) {
  params.validate();
  return build_h0(params, basis) + build_stark(params.F, basis, params.boundary);
}

}  // namespace twobody

#include "oracles.hpp"

#include "twobody/basis.hpp"
#include "twobody/bound_band.hpp"
#include "twobody/errors.hpp"
#include "twobody/hamiltonian.hpp"
#include "twobody/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace twobody;

namespace {

constexpr double pi = std::numbers::pi;

// Isolated levels (outside [-2J, 2J]) of the independently built chain.
std::vector<double> oracle_isolated(double J, double U, int length) {
  Eigen::VectorXd ev = oracle::symmetric_eigenvalues(oracle::sector_chain(J, U, length));
  std::vector<double> out;
  for (double e : ev)
    if (std::abs(e) > 2.0 * J + 1e-9) out.push_back(e);
  return out;
}

}  // namespace

TEST(Sector, Constants) {
  for (double K : {-2.5, -1.0, 0.0, 0.3, 3.0}) {
    auto s = MomentumSector::make(K, 1.3, -6.24);
    EXPECT_NEAR(s.J, 2.6 * std::cos(K / 2), 1e-12);
    EXPECT_GE(s.J, 0.0);
    EXPECT_NEAR(s.u * s.J, -6.24, 1e-12);
  }
  EXPECT_TRUE(MomentumSector::make(pi, 1.0, -6.24).flat());
}

TEST(Heq, ThreeByThree) {
  // J_K = 1 at K = 2 arccos(1/2) with kappa = 1; L = 2 is below the usual
  // truncation but the construction is the same.
  const double K = 2.0 * std::acos(0.5);
  auto h = build_heq(K, 1.0, 0.0, 2);
  Eigen::VectorXd ev = oracle::symmetric_eigenvalues(h.to_dense());
  EXPECT_NEAR(ev[0], -std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(ev[1], 0.0, 1e-12);
  EXPECT_NEAR(ev[2], std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(h.entry(0, 1), -std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(h.entry(1, 2), -1.0, 1e-12);
}

TEST(Heq, StructureMatchesOracle) {
  auto h = build_heq(0.7, 1.0, -6.24, 60);
  EXPECT_EQ(h.dim(), 61u);
  EXPECT_TRUE(h.is_symmetric());
  EXPECT_EQ(h.entry(1, 1), -6.24);
  const double J = 2.0 * std::cos(0.35);
  EXPECT_LT((h.to_dense() - oracle::sector_chain(J, -6.24, 60)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(BoundStates, MatchTruncatedChainAtZeroMomentum) {
  auto sol = solve_bound_states(0.0, 1.0, -6.24);
  auto ref = oracle_isolated(2.0, -6.24, 400);
  ASSERT_EQ(sol.states.size(), 2u);
  ASSERT_EQ(ref.size(), 2u);
  // states are sorted by descending energy, the oracle ascending
  EXPECT_NEAR(sol.states[0].energy, ref[1], 1e-8);
  EXPECT_NEAR(sol.states[1].energy, ref[0], 1e-8);
  EXPECT_EQ(sol.states[0].branch, Branch::Upper);
  EXPECT_EQ(sol.states[1].branch, Branch::Lower);
}

TEST(BoundStates, CubicResidualAndContinuumGap) {
  for (double K : momentum_grid(41)) {
    auto sol = solve_bound_states(K, 1.0, -6.24);
    for (const BoundState& b : sol.states) {
      EXPECT_GT(b.beta, 0.0);
      EXPECT_LT(std::abs(b.cubic_residual()), 1e-10) << "K=" << K;
      EXPECT_GE(std::abs(b.energy), 2.0 * sol.sector.J) << "K=" << K;
      const double x = std::exp(b.beta);
      EXPECT_NEAR(b.energy, -b.parity * b.J * (x + 1.0 / x), 1e-10);
    }
  }
}

TEST(BoundStates, LargeInteractionAsymptotics) {
  // |u| > 50. The chain carries U on both r = 0 and r = 1, so the deep levels
  // are the r = 0, 1 dimer U -+ sqrt(2) J, shifted at second order by the
  // J/sqrt(2) coupling of that dimer to r = 2.
  for (double U : {-120.0, 130.0}) {
    const double K = 0.4;
    auto sol = solve_bound_states(K, 1.0, U);
    const double J = sol.sector.J;
    ASSERT_GT(std::abs(U / J), 50.0);
    auto ref = oracle_isolated(J, U, 400);
    ASSERT_EQ(sol.states.size(), 2u);
    for (const BoundState& b : sol.states) {
      const double dimer = std::min(std::abs(b.energy - (U + std::sqrt(2.0) * J)),
                                    std::abs(b.energy - (U - std::sqrt(2.0) * J)));
      EXPECT_LT(dimer, 2.0 * J * J / std::abs(U)) << "U=" << U;
      double best = 1e9;
      for (double e : ref) best = std::min(best, std::abs(e - b.energy));
      EXPECT_LT(best, 1e-8);
    }
  }
}

TEST(BoundStates, NoInteractionNoBoundState) {
  EXPECT_TRUE(solve_bound_states(0.3, 1.0, 0.0).states.empty());
}

TEST(BoundStates, FlatSector) {
  auto sol = solve_bound_states(pi, 1.0, -6.24);
  EXPECT_TRUE(sol.flat);
}

TEST(BoundStates, MomentumReflectionSymmetry) {
  for (double K : {0.2, 1.1, 2.4, 2.9}) {
    auto a = solve_bound_states(K, 1.0, -6.24);
    auto b = solve_bound_states(-K, 1.0, -6.24);
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      EXPECT_NEAR(a.states[k].beta, b.states[k].beta, 1e-12);
      EXPECT_NEAR(a.states[k].energy, b.states[k].energy, 1e-12);
    }
  }
}

TEST(BoundStates, TruncationConvergence) {
  for (double K : {0.0, 1.5, -2.8}) {
    auto l200 = chain_isolated_levels(K, 1.0, -6.24, 200);
    auto l400 = chain_isolated_levels(K, 1.0, -6.24, 400);
    ASSERT_EQ(l200.size(), l400.size());
    for (std::size_t k = 0; k < l200.size(); ++k) EXPECT_NEAR(l200[k], l400[k], 1e-10);
  }
}

TEST(RealSpace, EigenvectorOfRingHamiltonian) {
  const std::size_t n = 111;
  TwoBosonBasis basis(n);
  ModelParams p;
  p.sites = n;
  p.U = p.V = -6.24;
  p.boundary = Boundary::Ring;
  auto h0 = build_h0(p, basis);
  auto grid = momentum_grid(n);
  // nearest grid point to -0.9 pi
  double K = grid[0];
  for (double k : grid)
    if (std::abs(k + 0.9 * pi) < std::abs(K + 0.9 * pi)) K = k;
  auto sol = solve_bound_states(K, 1.0, -6.24);
  ASSERT_EQ(sol.states.size(), 2u);
  std::vector<StateVector> vecs;
  for (const BoundState& b : sol.states) {
    StateVector v = bound_state_realspace(b, basis);
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_LT((h0.apply(v) - b.energy * v).norm(), 1e-6);
    vecs.push_back(v);
  }
  EXPECT_LT(std::abs(vecs[0].dot(vecs[1])), 1e-6);
}

TEST(RealSpace, RejectsOffGridMomentumAndEvenRing) {
  auto sol = solve_bound_states(0.1234, 1.0, -6.24);
  ASSERT_FALSE(sol.states.empty());
  EXPECT_THROW(bound_state_realspace(sol.states[0], TwoBosonBasis(11)), InvalidArgument);
  auto zero = solve_bound_states(0.0, 1.0, -6.24);
  EXPECT_THROW(bound_state_realspace(zero.states[0], TwoBosonBasis(10)), InvalidArgument);
}

TEST(Band, CompletenessThreshold) {
  auto strong = band_scan(1.0, -6.24, 111);
  EXPECT_TRUE(strong.complete(Branch::Upper));
  EXPECT_TRUE(strong.complete(Branch::Lower));
  auto weak = band_scan(1.0, -5.0, 111);
  EXPECT_FALSE(weak.complete(Branch::Upper) && weak.complete(Branch::Lower));
  auto deep = band_scan(0.4, -6.0, 111);
  EXPECT_TRUE(deep.complete(Branch::Upper));
  EXPECT_TRUE(deep.complete(Branch::Lower));
  EXPECT_GT(deep.min_edge_gap(), 0.0);
}

TEST(Band, CsvColumns) {
  std::ostringstream out;
  write_band_csv(out, band_scan(1.0, -6.24, 5));
  std::string header = out.str().substr(0, out.str().find('\n'));
  EXPECT_EQ(header, "K,branch,beta,energy");
  EXPECT_THROW(band_scan(1.0, -6.24, 6), InvalidArgument);
}

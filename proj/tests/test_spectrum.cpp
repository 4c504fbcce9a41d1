#include "twobody/spectrum.hpp"

#include "twobody/errors.hpp"
#include "twobody/quench.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace twobody;

namespace {

ModelParams three_site(double kappa = 0.4) {
  ModelParams p;
  p.sites = 3;
  p.kappa = kappa;
  p.U = p.V = -6.0;
  return p;
}

// tracked level id -> index in slice s, or -1
int index_of(const LevelTracking& t, std::size_t s, int id) {
  for (std::size_t k = 0; k < t.ids[s].size(); ++k)
    if (t.ids[s][k] == id) return static_cast<int>(k);
  return -1;
}

}  // namespace

TEST(Spectrum, SliceShapes) {
  auto slices = spectrum_vs_field({-4.0, -3.0, -2.0}, three_site());
  ASSERT_EQ(slices.size(), 3u);
  for (const auto& s : slices) {
    ASSERT_EQ(s.eigenvalues.size(), 6);
    ASSERT_EQ(s.correlations.size(), 6);
    for (Eigen::Index k = 1; k < 6; ++k) EXPECT_LE(s.eigenvalues[k - 1], s.eigenvalues[k]);
    for (Eigen::Index k = 0; k < 6; ++k) {
      EXPECT_GE(s.correlations[k], 0.0);
      EXPECT_LE(s.correlations[k], 2.0);
    }
  }
}

TEST(Spectrum, NoHoppingGivesLinearLevels) {
  auto p = three_site(1.0);
  p.kappa = 1e-300;  // kappa must be positive; this is numerically zero hopping
  p.U = p.V = 0.0;
  auto slices = spectrum_vs_field({-2.0, -1.0}, p);
  // levels F (i + j) for the six pairs: slopes 2,3,4,4,5,6
  std::vector<double> slopes{6, 5, 4, 4, 3, 2};  // ascending energy at F < 0
  for (const auto& s : slices)
    for (Eigen::Index k = 0; k < 6; ++k) EXPECT_NEAR(s.eigenvalues[k], s.F * slopes[k], 1e-12);
}

TEST(Spectrum, WindowFiltersLevels) {
  SpectrumOptions o;
  o.window = EnergyWindow{-13.0, -9.0};
  auto slices = spectrum_vs_field({-3.0}, three_site(), o);
  for (double e : slices[0].eigenvalues) {
    EXPECT_GE(e, -13.0);
    EXPECT_LE(e, -9.0);
  }
  auto p = three_site();
  p.boundary = Boundary::Ring;
  EXPECT_THROW(spectrum_vs_field({0.0}, p), InvalidArgument);
}

TEST(Spectrum, LargeBasisUsesWindowedSolver) {
  ModelParams p;
  p.sites = 30;
  p.U = p.V = -6.24;
  SpectrumOptions dense, banded;
  dense.window = banded.window = EnergyWindow{-8.0, -5.0};
  banded.dense_limit = 10;
  auto a = spectrum_vs_field({-0.1}, p, dense);
  auto b = spectrum_vs_field({-0.1}, p, banded);
  ASSERT_EQ(a[0].eigenvalues.size(), b[0].eigenvalues.size());
  EXPECT_LT((a[0].eigenvalues - b[0].eigenvalues).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((a[0].correlations - b[0].correlations).cwiseAbs().maxCoeff(), 1e-6);
  banded.window.reset();
  EXPECT_THROW(spectrum_vs_field({-0.1}, p, banded), InvalidArgument);
}

TEST(Classification, PairAndScatteringStates) {
  auto slices = spectrum_vs_field({-1.0}, three_site());
  auto labels = classify_levels(slices[0]);
  // For F > U/2 the unpaired (1,3) level 4F lies above the pair U + 2F.
  EXPECT_GT(slices[0].correlations[5], 1.5);
  EXPECT_EQ(labels[5], LevelLabel::Uncorrelated);
  EXPECT_LT(slices[0].correlations[4], 0.5);
  EXPECT_EQ(labels[4], LevelLabel::Correlated);

  ModelParams free;
  free.sites = 41;
  free.U = free.V = 0.0;
  auto s = spectrum_vs_field({1e-9}, free);
  double mean = s[0].correlations.mean();
  EXPECT_GT(mean, 41.0 / 4 - 4);
  auto l = classify_levels(s[0]);
  EXPECT_EQ(l[l.size() / 2], LevelLabel::Uncorrelated);
}

TEST(Crossings, SingleAvoidedCrossingNearHalfInteraction) {
  auto slices = spectrum_vs_field(field_grid(-5.0, -1.0, 0.02), three_site());
  auto crossings = detect_avoided_crossings(slices);
  // restricted to the top two levels
  auto tracking = track_levels(slices);
  int top_a = tracking.ids.front()[5], top_b = tracking.ids.front()[4];
  std::vector<AvoidedCrossing> top;
  for (const auto& c : crossings)
    if ((c.level_a == top_a || c.level_a == top_b) && (c.level_b == top_a || c.level_b == top_b)) top.push_back(c);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_NEAR(top[0].F_center, -3.0, 0.2);
  EXPECT_GT(top[0].gap, 0.0);
  EXPECT_FALSE(top[0].true_crossing);
  EXPECT_NE(top[0].label_a, top[0].label_b);
}

TEST(Crossings, CorrelationExchangeBetweenTopLevels) {
  auto slices = spectrum_vs_field(field_grid(-4.0, -2.0, 0.01), three_site());
  auto tracking = track_levels(slices);
  EXPECT_TRUE(tracking.ambiguous.empty());
  const std::size_t last = slices.size() - 1;
  for (int pos : {4, 5}) {
    int id = tracking.ids.front()[pos];
    int k_end = index_of(tracking, last, id);
    ASSERT_GE(k_end, 0);
    double r0 = slices.front().correlations[pos];
    double r1 = slices[last].correlations[k_end];
    EXPECT_GT(std::abs(r1 - r0), 1.0);
    if (r0 < 0.5) EXPECT_GT(r1, 1.5);
  }
  // the level that is pair-like at F = -4 sits on top, and is on the bottom of the pair at F = -2
  int pairlike = slices.front().correlations[5] < 0.5 ? 5 : 4;
  EXPECT_LT(slices.front().correlations[pairlike], 0.5);
}

TEST(Crossings, ExactCrossingsWithoutHopping) {
  auto p = three_site();
  p.kappa = 1e-300;
  p.U = p.V = -6.0;
  auto slices = spectrum_vs_field(field_grid(-5.01, -1.01, 0.02), p);  // F = -3 falls between samples
  CrossingOptions opts;
  opts.require_mixed = false;
  auto crossings = detect_avoided_crossings(slices, opts);
  ASSERT_FALSE(crossings.empty());
  bool near_three = false;
  for (const auto& c : crossings) {
    EXPECT_TRUE(c.true_crossing);
    EXPECT_LT(c.gap, 1e-9);
    if (std::abs(c.F_center + 3.0) < 1e-6) near_three = true;
  }
  EXPECT_TRUE(near_three);  // (1,1): U + 2F meets (1,3): 4F at F = U/2
}

TEST(Crossings, JsonOutput) {
  std::vector<AvoidedCrossing> xs(1);
  xs[0].F_center = -3.01;
  xs[0].gap = 0.05;
  std::ostringstream out;
  write_crossings_json(out, xs);
  auto j = nlohmann::json::parse(out.str());
  ASSERT_EQ(j.size(), 1u);
  EXPECT_DOUBLE_EQ(j[0]["F_center"].get<double>(), -3.01);
  EXPECT_EQ(j[0]["classification"].size(), 2u);
}

#pragma once

#include "twobody/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace twobody {

struct EnergyWindow {
  double lower;
  double upper;
};

/// Levels of H(F) (optionally restricted to an energy window) with the mean
/// pair separation of each eigenvector.
struct SpectrumSlice {
  double F = 0.0;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::VectorXd correlations;  // mean distance per eigenvector
  Eigen::MatrixXd vectors;       // eigenvectors, for level tracking
  std::optional<EnergyWindow> window;
};

struct SpectrumOptions {
  std::optional<EnergyWindow> window;
  /// Dimensions above this use the banded solver plus inverse iteration.
  std::size_t dense_limit = 1500;
  bool keep_vectors = true;
  unsigned threads = 1;
};

/// Diagonalizes H(F) = H0 + F sum j n_j on the open chain for every F.
std::vector<SpectrumSlice> spectrum_vs_field(const std::vector<double>& fields,
                                             const ModelParams& params,
                                             const SpectrumOptions& options = {});

enum class LevelLabel { Correlated, Uncorrelated };
std::string_view to_string(LevelLabel l);

/// Correlated when the mean separation is at most r_threshold.
std::vector<LevelLabel> classify_levels(const SpectrumSlice& slice, double r_threshold = 1.0);

/// Level identities across slices: track[s][k] is the tracked level id of the
/// k-th eigenvalue of slice s (or -1 when it entered through the window edge).
struct LevelTracking {
  std::vector<std::vector<int>> ids;
  /// Slice indices s where some assignment from s-1 to s had overlap below the
  /// threshold.
  std::vector<std::size_t> ambiguous;
  int level_count = 0;
};

/// Greedy maximal-overlap assignment between consecutive slices.
LevelTracking track_levels(const std::vector<SpectrumSlice>& slices, double min_overlap = 0.5);

struct AvoidedCrossing {
  double F_center = 0.0;
  double gap = 0.0;
  int level_a = 0;  // tracked ids
  int level_b = 0;
  LevelLabel label_a = LevelLabel::Correlated;  // at the first slice of the pair
  LevelLabel label_b = LevelLabel::Uncorrelated;
  bool true_crossing = false;
  bool flagged = false;  // tracking was ambiguous in the neighbourhood
};

struct CrossingOptions {
  double r_threshold = 1.0;
  double min_overlap = 0.5;
  /// Gaps at or below this are reported as true crossings.
  double crossing_tolerance = 1e-9;
  /// Only crossings whose two levels swap classification are reported.
  bool require_mixed = true;
};

/// Local minima of the gap between tracked levels that are adjacent in
/// energy, refined by a parabola through the three grid points.
std::vector<AvoidedCrossing> detect_avoided_crossings(const std::vector<SpectrumSlice>& slices,
                                                      const CrossingOptions& options = {});

/// Columns F, level_id, energy, rbar, label.
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumSlice>& slices,
                        const LevelTracking& tracking, double r_threshold = 1.0);
/// JSON array of {F_center, gap, classification}.
void write_crossings_json(std::ostream& out, const std::vector<AvoidedCrossing>& crossings);

}  // namespace twobody

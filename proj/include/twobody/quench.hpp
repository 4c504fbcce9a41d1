#pragma once

#include "twobody/basis.hpp"
#include "twobody/bound_band.hpp"
#include "twobody/hermitian_operator.hpp"
#include "twobody/model.hpp"
#include "twobody/propagator.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace twobody {

/// Gaussian packet over one bound branch:
/// Psi(0) ~ sum_K exp(-(K - K0)^2 / (2 alpha^2) - i NA K) |psi_K>.
struct WavePacketSpec {
  double K0 = -0.9 * std::numbers::pi;
  double alpha = 0.2;
  int NA = 36;
  Branch branch = Branch::Upper;

  void validate(std::size_t sites) const;
};

/// All bound states of the field-free ring, stacked as columns.
class BoundProjector {
 public:
  BoundProjector() = default;
  BoundProjector(const BandStructure& band, const TwoBosonBasis& ring_basis);

  /// sum_{sigma,K} |<psi_K^sigma|psi>|^2
  double transfer(const StateVector& psi) const;
  std::size_t size() const { return static_cast<std::size_t>(vectors_.cols()); }
  const Eigen::MatrixXcd& vectors() const { return vectors_; }
  /// Column index of the state (sector, branch); nullopt when it does not exist.
  std::optional<std::size_t> column(std::size_t sector, Branch b) const;

 private:
  Eigen::MatrixXcd vectors_;
  std::vector<std::pair<std::size_t, Branch>> labels_;
};

StateVector prepare_wavepacket(const WavePacketSpec& spec, const BandStructure& band,
                               const BoundProjector& projector);

double transfer_rate(const StateVector& psi, const BoundProjector& projector);

/// Immutable inputs shared by every quench of one field-free model: the open
/// chain H0, the ring bound band, and the initial packet.
struct QuenchSetup {
  ModelParams model;  // F ignored
  WavePacketSpec packet;
  TwoBosonBasis basis;
  HermitianOperator h0;
  BandStructure band;
  BoundProjector projector;
  StateVector psi0;
};

/// Builds the setup; model.sites must be odd. Throws IncompleteBand when the
/// packet needs a bound state that does not exist.
QuenchSetup prepare_quench(const ModelParams& model, const WavePacketSpec& packet);

struct QuenchTrajectory {
  std::vector<double> times;
  std::vector<double> transfer;
  std::vector<double> distance;
  std::vector<double> energy;
  std::vector<double> norm;
  StateVector final_state;
};

enum class Backend { Spectral, Chebyshev };

struct EvolveOptions {
  Backend backend = Backend::Chebyshev;
  ChebyshevOptions chebyshev;
  /// Reuse an existing decomposition of H for the spectral backend.
  const SpectralPropagator* spectral = nullptr;
};

/// Evolves psi0 under H, sampling T(t), r(t), <H0>(t) and the norm at each
/// requested time. Times must start at 0 and be ascending.
QuenchTrajectory evolve(const HermitianOperator& h, const StateVector& psi0,
                        const std::vector<double>& times, const QuenchSetup& setup,
                        const EvolveOptions& options = {});

/// Uniform grid 0, dt, 2dt, ..., t_end.
std::vector<double> time_grid(double t_end, double dt);

/// Columns t, transfer, distance, energy, norm.
void write_trajectory_csv(std::ostream& out, const QuenchTrajectory& traj);

/// First time at which the sliding-window standard deviation of T(t) drops
/// below `threshold` over `window` time units.
std::optional<double> detect_plateau(const QuenchTrajectory& traj, double window = 100.0,
                                     double threshold = 0.02);

struct EnergyWeight {
  double energy;
  double weight;
};

/// Smallest set of eigenstates (largest weights first) whose weights sum to at
/// least `mass`, returned sorted by energy.
std::vector<EnergyWeight> energy_distribution(const StateVector& psi0,
                                              const SpectralPropagator& spectrum, double mass);

struct SweepPoint {
  double F;
  double transfer = 0.0;
  bool ok = false;
  std::string error;
};

struct PeriodEstimate {
  bool periodic = false;
  double period = 0.0;
  double uncertainty = 0.0;
  double peak_correlation = 0.0;
  std::size_t lag = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double t_final = 0.0;
  PeriodEstimate period;

  std::vector<double> fields() const;
  std::vector<double> transfers() const;
};

/// Field grid lo, lo+step, ..., up to hi (inclusive within half a step).
std::vector<double> field_grid(double lo, double hi, double step);

/// T(t_f) for each F, distributed over `threads` workers. A failed point is
/// recorded with ok = false and the sweep continues.
SweepResult sweep_transfer(const std::vector<double>& fields, double t_final,
                           const QuenchSetup& setup, unsigned threads = 1,
                           const ChebyshevOptions& chebyshev = {});

/// Dominant period of a uniformly sampled series from the first local maximum
/// of its autocorrelation at positive lag. A peak below `min_correlation`
/// (normalized) or a constant series reports periodic = false.
PeriodEstimate estimate_period(const std::vector<double>& values, double spacing,
                               double min_correlation = 0.2);
PeriodEstimate estimate_period(const SweepResult& sweep);

/// Columns F, transfer_tf.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

}  // namespace twobody

#pragma once

#include "twobody/basis.hpp"
#include "twobody/hermitian_operator.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace twobody {

/// Center-of-momentum sector of the pair. J_K = 2 kappa cos(K/2), u_K = U / J_K.
struct MomentumSector {
  double K;
  double J;
  double u;

  static MomentumSector make(double K, double kappa, double U);
  bool flat() const { return J == 0.0; }
};

/// Upper and Lower order the two possible bound states of a sector by
/// energy. When only one exists it is the one farther from the scattering
/// continuum, i.e. Lower for attractive U and Upper for repulsive U.
enum class Branch { Upper, Lower };

std::string_view to_string(Branch b);

/// Bethe-ansatz bound pair in sector K: relative amplitude psi_r =
/// A (parity / x)^r for r >= 1 with x = e^beta, and a separate on-site
/// amplitude psi_0.
struct BoundState {
  double K = 0.0;
  Branch branch = Branch::Lower;
  int parity = 1;  // sign in front of e^{3 beta} in the secular cubic
  double beta = 0.0;
  double energy = 0.0;
  double J = 0.0;
  double u = 0.0;

  /// sigma x^3 + 2u x^2 + sigma (u^2 - 1) x + u at x = e^beta, in units of x^3.
  double cubic_residual() const;
  /// Unnormalized relative amplitudes psi_0..psi_rmax with A = 1.
  std::vector<double> relative_amplitudes(std::size_t r_max) const;
};

struct SectorSolution {
  MomentumSector sector;
  std::vector<BoundState> states;  // sorted by descending energy
  bool flat = false;               // K = +-pi, J_K = 0
};

/// Relative-coordinate chain of one momentum sector, truncated at separation L:
/// hop -sqrt(2) J between r = 0 and 1, -J beyond; U on r = 0 and r = 1.
HermitianOperator build_heq(double K, double kappa, double U, std::size_t length);

/// Isolated eigenvalues (outside [-2J, 2J]) of the truncated chain.
std::vector<double> chain_isolated_levels(double K, double kappa, double U,
                                          std::size_t length = 400);

struct BoundSolveOptions {
  std::size_t validation_length = 400;
  double validation_tolerance = 1e-8;
};

/// Real roots e^beta > 1 of the secular cubic for both signs, each kept only
/// if the truncated chain has a matching isolated eigenvalue. Energies are
/// -sigma J (x + 1/x).
SectorSolution solve_bound_states(double K, double kappa, double U,
                                  const BoundSolveOptions& options = {});

/// Bound state expanded over the ring two-boson basis of N (odd) sites.
/// K must lie on the grid 2 pi m / N.
StateVector bound_state_realspace(const BoundState& bound, const TwoBosonBasis& basis);

/// Grid K = 2 pi m / N, m = -(N-1)/2 .. (N-1)/2, for odd N.
std::vector<double> momentum_grid(std::size_t sites);

struct BandStructure {
  double kappa = 0.0;
  double U = 0.0;
  std::size_t sites = 0;
  std::vector<SectorSolution> sectors;  // one per grid K, ascending K

  bool complete(Branch b) const;
  /// Smallest distance of a bound energy to its continuum edge +-2J_K.
  double min_edge_gap() const;
  const BoundState* find(std::size_t sector, Branch b) const;
  std::size_t state_count() const;
};

BandStructure band_scan(double kappa, double U, std::size_t sites,
                        const BoundSolveOptions& options = {});

/// Columns K, branch, beta, energy.
void write_band_csv(std::ostream& out, const BandStructure& band);

}  // namespace twobody

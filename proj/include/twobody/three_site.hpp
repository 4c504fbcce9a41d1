#pragma once

#include <Eigen/Dense>

#include <vector>

namespace twobody {

/// Second-order effective Hamiltonian of the 3-site chain restricted to
/// {|up>, |p>} with |p> = (a_1^+)^2/sqrt(2)|0> and |up> = a_1^+ a_3^+|0>.
/// Row/column 0 is |up>, 1 is |p>. Valid for |F - U/2| << |U| and |F|, |U| >> kappa.
Eigen::Matrix2d effective_hamiltonian(double F, double U, double V, double kappa);

/// Closed-form two-level constants for U = V.
struct EffectiveConstants {
  double C0;
  double C1;
  double omega;
  double theta;  // atan2 convention: sin(theta) >= 0
  double tan_theta;
};

/// Throws SingularParameter for F in {0, U, -U}.
EffectiveConstants effective_constants(double F, double U, double kappa);

/// P(t) = sin^2(theta) sin^2(omega t).
double transfer_probability(double t, const EffectiveConstants& c);

/// Exact 1 - |<p|psi(t)>|^2 on the open 3-site chain (U = V), by dense
/// diagonalization of the 6x6 Hamiltonian including the field.
std::vector<double> exact_pair_loss(double F, double U, double kappa, const std::vector<double>& times);

/// Exact |<up|psi(t)>|^2 for psi(0) = |p> on the same chain.
std::vector<double> exact_unpaired_population(double F, double U, double kappa,
                                              const std::vector<double>& times);

struct OscillationFit {
  double amplitude;  // max - min of the sampled series
  double period;     // mean spacing of upward mid-range crossings; NaN if fewer than two
};

/// Amplitude and period of a sampled oscillation.
OscillationFit fit_oscillation(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace twobody

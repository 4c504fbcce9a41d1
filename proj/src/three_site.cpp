#include "twobody/three_site.hpp"

#include "twobody/basis.hpp"
#include "twobody/errors.hpp"
#include "twobody/hamiltonian.hpp"
#include "twobody/linalg.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace twobody {
namespace {

double checked_inverse(double d, const char* what) {
  if (d == 0.0) throw SingularParameter(std::string("vanishing denominator ") + what);
  return 1.0 / d;
}

}  // namespace

Eigen::Matrix2d effective_hamiltonian(double F, double U, double V, double kappa) {
  const double k2 = kappa * kappa;
  const double s2 = std::numbers::sqrt2;
  const double inv_a = checked_inverse(U - F - V, "U - F - V");
  const double inv_b = checked_inverse(F - V, "F - V");
  const double inv_c = checked_inverse(F * F - V * V, "F^2 - V^2");
  const double inv_d = checked_inverse(U - V - F, "U - V - F");

  Eigen::Matrix2d h;
  h(0, 1) = h(1, 0) = 0.5 * (s2 * k2 * inv_a + s2 * k2 * inv_b);
  h(0, 0) = 4.0 * F + 2.0 * k2 * V * inv_c;
  h(1, 1) = U + 2.0 * F + 2.0 * k2 * inv_d;
  return h;
}

EffectiveConstants effective_constants(double F, double U, double kappa) {
  if (F == 0.0 || F == U || F == -U)
    throw SingularParameter("effective constants need F not in {0, U, -U}");
  const double k2 = kappa * kappa;
  const double f2u2 = F * F - U * U;
  const double coupling = U * std::numbers::sqrt2 * k2 / (F * F - F * U);

  EffectiveConstants c{};
  c.C0 = 0.5 * U + 3.0 * F + k2 * U / f2u2 - k2 / F;
  c.C1 = U - 2.0 * F - 2.0 * k2 / F - 2.0 * k2 * U / f2u2;
  c.omega = 0.5 * std::hypot(coupling, c.C1);
  c.tan_theta = coupling / c.C1;
  // cos(theta) = C1 / (2 omega), sin(theta) = |coupling| / (2 omega)
  c.theta = std::atan2(std::abs(coupling), std::copysign(1.0, coupling) * c.C1);
  return c;
}

double transfer_probability(double t, const EffectiveConstants& c) {
  const double s = std::sin(c.theta) * std::sin(c.omega * t);
  return s * s;
}

namespace {

// |<target|psi(t)>|^2 for psi(0) = |p> on the exact 3-site chain.
std::vector<double> exact_overlap(double F, double U, double kappa, const std::vector<double>& times,
                                  int target_i, int target_j) {
  const TwoBosonBasis basis(3);
  ModelParams p;
  p.sites = 3;
  p.kappa = kappa;
  p.U = U;
  p.V = U;
  p.F = F;
  const auto ed = eigh(build_h(p, basis).to_dense());
  const Eigen::VectorXd from = ed.vectors.row(static_cast<Eigen::Index>(basis.rank(1, 1))).transpose();
  const Eigen::VectorXd to =
      ed.vectors.row(static_cast<Eigen::Index>(basis.rank(target_i, target_j))).transpose();

  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    std::complex<double> amp = 0.0;
    for (Eigen::Index n = 0; n < ed.values.size(); ++n)
      amp += to[n] * from[n] * std::polar(1.0, -ed.values[n] * t);
    out.push_back(std::norm(amp));
  }
  return out;
}

}  // namespace

std::vector<double> exact_pair_loss(double F, double U, double kappa,
                                    const std::vector<double>& times) {
  std::vector<double> out = exact_overlap(F, U, kappa, times, 1, 1);
  for (double& v : out) v = 1.0 - v;
  return out;
}

std::vector<double> exact_unpaired_population(double F, double U, double kappa,
                                              const std::vector<double>& times) {
  return exact_overlap(F, U, kappa, times, 1, 3);
}

OscillationFit fit_oscillation(const std::vector<double>& times, const std::vector<double>& values) {
  OscillationFit fit{0.0, std::numeric_limits<double>::quiet_NaN()};
  if (values.empty()) return fit;
  double lo = values.front(), hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  fit.amplitude = hi - lo;
  if (!(hi > lo)) return fit;

  // Upward crossings of the mid level, re-armed only after the series falls
  // below the lower quarter, so fast small ripples are not counted as cycles.
  const double mid = lo + 0.5 * (hi - lo);
  const double rearm = lo + 0.25 * (hi - lo);
  std::vector<double> rises;
  bool armed = values.front() < rearm;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] < rearm) armed = true;
    if (armed && values[k - 1] < mid && values[k] >= mid) {
      const double s = (mid - values[k - 1]) / (values[k] - values[k - 1]);
      rises.push_back(times[k - 1] + s * (times[k] - times[k - 1]));
      armed = false;
    }
  }
  if (rises.size() >= 2) fit.period = (rises.back() - rises.front()) / double(rises.size() - 1);
  return fit;
}

}  // namespace twobody

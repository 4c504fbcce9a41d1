#include "twobody/propagator.hpp"

#include "twobody/errors.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace twobody {

SpectralPropagator::SpectralPropagator(const HermitianOperator& h) : ed_(eigh(h.to_dense())) {}

SpectralPropagator::SpectralPropagator(EigenDecomposition decomposition)
    : ed_(std::move(decomposition)) {}

StateVector SpectralPropagator::project(const StateVector& psi) const {
  return ed_.vectors.transpose().cast<std::complex<double>>() * psi;
}

StateVector SpectralPropagator::evolve(const StateVector& psi0, double t) const {
  StateVector c = project(psi0);
  for (Eigen::Index n = 0; n < c.size(); ++n) c[n] *= std::polar(1.0, -ed_.values[n] * t);
  return ed_.vectors.cast<std::complex<double>>() * c;
}

ChebyshevPropagator::ChebyshevPropagator(const HermitianOperator& h, ChebyshevOptions options)
    : h_(&h), options_(options) {
  bounds_ = options_.bounds ? *options_.bounds : estimate_spectral_bounds(h);
  center_ = 0.5 * (bounds_.upper + bounds_.lower);
  half_width_ = 0.5 * (bounds_.upper - bounds_.lower);
  if (!(half_width_ > 0.0)) throw InvalidArgument("degenerate spectral interval");
}

int ChebyshevPropagator::order(double dt) const {
  const double tau = half_width_ * std::abs(dt);
  // J_k(tau) decays faster than exponentially once k > tau.
  int k = static_cast<int>(tau);
  const double tiny = 1e-3 * options_.step_tolerance;
  while (k < static_cast<int>(tau) + 10000) {
    if (std::abs(std::cyl_bessel_j(double(k), tau)) < tiny &&
        std::abs(std::cyl_bessel_j(double(k + 1), tau)) < tiny)
      return k + 1;
    ++k;
  }
  return k;
}

StateVector ChebyshevPropagator::step(const StateVector& psi, double dt) const {
  const double tau = half_width_ * dt;
  const int m = order(dt);
  std::vector<std::complex<double>> coeff(static_cast<std::size_t>(m));
  std::complex<double> phase_i = 1.0;  // (-i)^k
  for (int k = 0; k < m; ++k) {
    coeff[static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 2.0) * phase_i * std::cyl_bessel_j(double(k), std::abs(tau));
    if (tau < 0.0 && (k % 2 == 1)) coeff[static_cast<std::size_t>(k)] = -coeff[static_cast<std::size_t>(k)];
    phase_i *= std::complex<double>(0.0, -1.0);
  }
  double tail = 0.0;
  for (int k = m; k < m + 5; ++k) tail += 2.0 * std::abs(std::cyl_bessel_j(double(k), std::abs(tau)));
  if (tail > options_.step_tolerance)
    throw AccuracyError("Chebyshev expansion did not converge", tail);

  // Rescaled operator X = (H - c) / w; T_{k+1} = 2 X T_k - T_{k-1}.
  const double inv_w = 1.0 / half_width_;
  StateVector t_prev = psi, t_cur(psi.size()), t_next(psi.size()), hv(psi.size());
  h_->apply_into(t_prev, hv);
  t_cur = (hv - center_ * t_prev) * inv_w;
  StateVector acc = coeff[0] * t_prev;
  if (m > 1) acc += coeff[1] * t_cur;
  for (int k = 2; k < m; ++k) {
    h_->apply_into(t_cur, hv);
    t_next = 2.0 * inv_w * (hv - center_ * t_cur) - t_prev;
    acc += coeff[static_cast<std::size_t>(k)] * t_next;
    std::swap(t_prev, t_cur);
    std::swap(t_cur, t_next);
  }
  acc *= std::polar(1.0, -center_ * dt);

  const double drift = std::abs(acc.norm() - psi.norm());
  if (drift > options_.step_tolerance)
    throw AccuracyError("Chebyshev step lost unitarity; spectral interval too narrow", drift);
  return acc;
}

StateVector ChebyshevPropagator::evolve(const StateVector& psi, double t) const {
  if (t == 0.0) return psi;
  const double max_dt = options_.max_scaled_step / half_width_;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / max_dt)));
  const double dt = t / steps;
  StateVector out = psi;
  for (int s = 0; s < steps; ++s) out = step(out, dt);
  return out;
}

}  // namespace twobody

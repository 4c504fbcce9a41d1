#pragma once

#include "twobody/hermitian_operator.hpp"
#include "twobody/linalg.hpp"

#include <optional>

namespace twobody {

/// exp(-iHt) from a full eigendecomposition of H.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const HermitianOperator& h);
  explicit SpectralPropagator(EigenDecomposition decomposition);

  StateVector evolve(const StateVector& psi0, double t) const;
  /// Coefficients <E_n|psi> in the eigenbasis.
  StateVector project(const StateVector& psi) const;
  const EigenDecomposition& decomposition() const { return ed_; }

 private:
  EigenDecomposition ed_;
};

struct ChebyshevOptions {
  /// Bound on the truncated Chebyshev tail per step.
  double step_tolerance = 1e-8;
  /// Largest step, in units of the inverse spectral half-width.
  double max_scaled_step = 200.0;
  /// Spectral interval; estimated by Lanczos when empty.
  std::optional<SpectralBounds> bounds;
};

/// exp(-iHt) by Chebyshev expansion of the rescaled operator.
class ChebyshevPropagator {
 public:
  explicit ChebyshevPropagator(const HermitianOperator& h, ChebyshevOptions options = {});

  /// One expansion over dt. Throws AccuracyError if the norm drifts by more
  /// than the step tolerance (spectral interval too narrow) or the expansion
  /// does not converge.
  StateVector step(const StateVector& psi, double dt) const;
  /// Advance by t, split into steps no longer than max_scaled_step.
  StateVector evolve(const StateVector& psi, double t) const;

  const SpectralBounds& bounds() const { return bounds_; }
  /// Number of terms used for a step of length dt.
  int order(double dt) const;

 private:
  const HermitianOperator* h_;
  ChebyshevOptions options_;
  SpectralBounds bounds_;
  double center_;
  double half_width_;
};

}  // namespace twobody

#pragma once

#include "qmoves/quantum/spectral.hpp"

namespace qmoves {

/// Squared overlap |<a|b>|^2. Symmetric and insensitive to global phase.
template <typename Scalar>
Scalar fidelity(const BasicWaveFunction<Scalar>& a, const BasicWaveFunction<Scalar>& b) {
  if (!(a.config() == b.config()) || a.size() != b.size())
    throw ArgumentError("fidelity of wave functions on different grids");
  const std::complex<Scalar> overlap = a.amplitudes().dot(b.amplitudes()) * Scalar(a.config().dx());
  return std::min(std::norm(overlap), Scalar(1));
}

/// Probability mass on grid points with x_lo <= x <= x_hi.
template <typename Scalar>
Scalar zone_probability(const BasicWaveFunction<Scalar>& psi, double x_lo, double x_hi) {
  if (!(x_lo < x_hi)) throw ArgumentError("zone interval must satisfy x_lo < x_hi");
  const SimConfig& c = psi.config();
  const auto x = grid_positions<Scalar>(c);
  const auto inside = (x >= Scalar(x_lo) && x <= Scalar(x_hi)).template cast<Scalar>();
  return (psi.density() * inside).sum() * Scalar(c.dx());
}

template <typename Scalar>
Scalar position_expectation(const BasicWaveFunction<Scalar>& psi) {
  const auto x = grid_positions<Scalar>(psi.config());
  return (psi.density() * x).sum() * Scalar(psi.config().dx());
}

/// Mass within `points` grid points of either end of the domain.
template <typename Scalar>
Scalar edge_probability(const BasicWaveFunction<Scalar>& psi, int points = 5) {
  const auto rho = psi.density();
  return (rho.head(points).sum() + rho.tail(points).sum()) * Scalar(psi.config().dx());
}

template <typename Scalar>
Scalar potential_energy(const BasicWaveFunction<Scalar>& psi, const BasicPotentialField<Scalar>& v) {
  return (psi.density() * v).sum() * Scalar(psi.config().dx());
}

/// <H> = <T> + <V> with the spectral kinetic operator.
template <typename Scalar>
Scalar energy(const BasicWaveFunction<Scalar>& psi, const BasicPotentialField<Scalar>& v) {
  SplitStepper<Scalar> stepper(psi.config());
  return stepper.kinetic_energy(psi.amplitudes()) + potential_energy(psi, v);
}

}  // namespace qmoves

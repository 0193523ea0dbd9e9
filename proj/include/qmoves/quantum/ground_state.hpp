#pragma once

#include <optional>

#include "qmoves/quantum/observables.hpp"

namespace qmoves {

struct GroundStateOptions {
  double imaginary_dt = 1e-4;
  long max_iterations = 2'000'000;
  long min_iterations = 10;
  /// Starting state; defaults to a Gaussian at the potential minimum.
  std::optional<WaveFunction> initial_guess;
};

/// Lowest-energy state of `v` by imaginary-time split-operator propagation.
///
/// Each iteration applies exp(-H dtau) in Strang-split form and renormalizes.
/// Iteration stops once the energy changes by less than `tol` relative to
/// max(|E|, 1) in a single step.
template <typename Scalar = double>
BasicWaveFunction<Scalar> ground_state(const BasicPotentialField<Scalar>& v, const SimConfig& config,
                                       double tol = 1e-10,
                                       const GroundStateOptions& options = {}) {
  config.validate();
  check_potential(v, config);

  Eigen::Index lowest = 0;
  v.minCoeff(&lowest);
  const auto far_field = std::max(v[0], v[v.size() - 1]);
  if (!(v[lowest] < far_field))
    throw ArgumentError("potential is not confining: no well below the far-field value");

  BasicWaveFunction<Scalar> psi;
  if (options.initial_guess) {
    if (!(options.initial_guess->config() == config))
      throw ArgumentError("initial guess lives on a different grid");
    psi = BasicWaveFunction<Scalar>(
        config, options.initial_guess->amplitudes().template cast<std::complex<Scalar>>());
    psi.normalize();
  } else {
    const double x_min = config.domain_min + lowest * config.dx();
    psi = BasicWaveFunction<Scalar>::gaussian(config, x_min, 4 * config.dx() + 0.02);
  }

  SplitStepper<Scalar> stepper(config);
  const Scalar dtau = Scalar(options.imaginary_dt);
  // Shift by the minimum so the decay factors stay bounded near 1.
  const RealArray<Scalar> half_decay = (-(v - v[lowest]) * (dtau / 2)).exp();
  const RealArray<Scalar> kinetic_decay = (-stepper.kinetic() * dtau).exp();

  auto& amps = psi.amplitudes();
  Scalar e_prev = stepper.kinetic_energy(amps) + potential_energy(psi, v);
  for (long it = 1; it <= options.max_iterations; ++it) {
    stepper.imaginary_step(amps, half_decay, kinetic_decay);
    psi.normalize();
    const Scalar e = stepper.kinetic_energy(amps) + potential_energy(psi, v);
    if (it >= options.min_iterations &&
        std::abs(e - e_prev) < Scalar(tol) * std::max(std::abs(e), Scalar(1)))
      return psi;
    e_prev = e;
  }
  throw ConvergenceError("imaginary-time propagation did not converge", double(e_prev));
}

}  // namespace qmoves

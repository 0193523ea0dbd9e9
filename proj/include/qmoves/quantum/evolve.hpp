#pragma once

#include <cmath>
#include <type_traits>
#include <vector>

#include "qmoves/quantum/observables.hpp"

namespace qmoves {

struct EvolveOptions {
  /// Observe the state every `stride` steps (and always at t=0 and the end).
  int stride = 100;
  bool edge_guard = true;
  int edge_points = 5;
  double edge_threshold = 1e-3;
};

template <typename Scalar = double>
struct BasicTrajectory {
  std::vector<double> times;
  std::vector<BasicWaveFunction<Scalar>> states;
  BasicWaveFunction<Scalar> final_state;
};
using Trajectory = BasicTrajectory<double>;

/// Real-time split-operator propagation over [0, duration].
///
/// `potential_at` is either `Field(double t)` or `bool(double t, Field& v)`;
/// the second form fills `v` and returns false when the potential is unchanged
/// since the previous call, which skips rebuilding the kick. The potential of a
/// step is evaluated at the step midpoint. `observe(t, psi)` runs at every
/// sampled time; the edge-leak guard is checked at the same times.
template <typename Scalar, typename PotentialAt, typename Observer>
BasicWaveFunction<Scalar> evolve_observed(BasicWaveFunction<Scalar> psi, PotentialAt&& potential_at,
                                          double duration, const SimConfig& config,
                                          const EvolveOptions& options, Observer&& observe) {
  using Field = BasicPotentialField<Scalar>;
  using Vector = ComplexVector<Scalar>;
  config.validate();
  if (!(duration > 0.0)) throw ArgumentError("evolution duration must be positive");
  if (!(psi.config() == config)) throw ArgumentError("wave function lives on a different grid");
  if (options.stride < 1) throw ArgumentError("sampling stride must be >= 1");

  SplitStepper<Scalar> stepper(config);
  const double dt = config.dt;
  const long full_steps = static_cast<long>(std::floor(duration / dt + 1e-9));
  const double remainder = duration - full_steps * dt;
  const long steps = full_steps + (remainder > 1e-12 ? 1 : 0);

  auto check = [&](double t) {
    if (!options.edge_guard) return;
    const Scalar edge = edge_probability(psi, options.edge_points);
    if (edge > Scalar(options.edge_threshold))
      throw EdgeLeakError("probability " + std::to_string(double(edge)) +
                              " reached the periodic boundary at t=" + std::to_string(t),
                          t, double(edge));
  };

  Field v = Field::Zero(config.grid_points);
  Vector kick;
  const Vector drift = stepper.kinetic_phase(Scalar(dt));
  auto& amps = psi.amplitudes();

  check(0.0);
  observe(0.0, std::as_const(psi));
  for (long s = 0; s < steps; ++s) {
    const bool partial = s == full_steps;
    const double h = partial ? remainder : dt;
    const double t_mid = s * dt + h / 2;
    bool changed = true;
    if constexpr (std::is_invocable_r_v<bool, PotentialAt, double, Field&>) {
      changed = potential_at(t_mid, v) || kick.size() == 0;
    } else {
      v = potential_at(t_mid);
      check_potential(v, config);
    }
    if (changed || partial) kick = SplitStepper<Scalar>::phase(v * Scalar(-h / 2));
    if (partial)
      stepper.step_with_kick(amps, kick, stepper.kinetic_phase(Scalar(h)));
    else
      stepper.step_with_kick(amps, kick, drift);

    const bool last = s + 1 == steps;
    if (last || (s + 1) % options.stride == 0) {
      const double t = last ? duration : (s + 1) * dt;
      check(t);
      observe(t, std::as_const(psi));
    }
  }
  return psi;
}

template <typename Scalar, typename PotentialAt>
BasicTrajectory<Scalar> evolve(const BasicWaveFunction<Scalar>& psi, PotentialAt&& potential_at,
                               double duration, const SimConfig& config,
                               const EvolveOptions& options = {}) {
  BasicTrajectory<Scalar> out;
  out.final_state = evolve_observed(
      psi, std::forward<PotentialAt>(potential_at), duration, config, options,
      [&](double t, const BasicWaveFunction<Scalar>& state) {
        out.times.push_back(t);
        out.states.push_back(state);
      });
  return out;
}

}  // namespace qmoves

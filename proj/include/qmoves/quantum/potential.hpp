#pragma once

#include <cmath>
#include <string>

#include "qmoves/quantum/grid.hpp"

namespace qmoves {

/// Real potential sampled on the grid, in energy units.
template <typename Scalar = double>
using BasicPotentialField = RealArray<Scalar>;
using PotentialField = BasicPotentialField<double>;

/// Gaussian optical tweezer. Position is restricted to [x_min, x_max].
struct TweezerSpec {
  double sigma = 0.05;
  double depth_max = 160.0;
  double x_min = -1.0;
  double x_max = 1.0;

  void validate(const SimConfig& config) const {
    if (!(sigma > 0.0)) throw ValidationError("tweezer.sigma", "must be positive");
    if (!(depth_max > 0.0)) throw ValidationError("tweezer.depth_max", "must be positive");
    if (!(x_min <= x_max)) throw ValidationError("tweezer.x_min", "must not exceed x_max");
    if (x_min < config.domain_min || x_max > config.domain_max)
      throw ValidationError("tweezer.x_max", "position bounds must lie within the domain");
  }

  bool operator==(const TweezerSpec&) const = default;
};

/// One control knot: tweezer centre x0 and depth A at time t.
struct ControlSample {
  double t = 0.0;
  double x0 = 0.0;
  double A = 0.0;

  bool operator==(const ControlSample&) const = default;
};

inline void check_sample_bounds(const TweezerSpec& spec, const ControlSample& s) {
  if (!(s.t >= 0.0)) throw BoundsError("t", "control time must be non-negative");
  if (!(s.x0 >= spec.x_min && s.x0 <= spec.x_max))
    throw BoundsError("x0", "tweezer position " + std::to_string(s.x0) + " outside [" +
                                std::to_string(spec.x_min) + ", " + std::to_string(spec.x_max) + "]");
  if (!(s.A >= 0.0 && s.A <= spec.depth_max))
    throw BoundsError("A", "tweezer depth " + std::to_string(s.A) + " outside [0, " +
                               std::to_string(spec.depth_max) + "]");
}

/// Adds -A exp(-(x-x0)^2 / (2 sigma^2)) to `field` in place.
template <typename Scalar>
void add_gaussian(BasicPotentialField<Scalar>& field, const RealArray<Scalar>& x, double x0,
                  double amplitude, double sigma) {
  if (amplitude == 0.0) return;
  const Scalar inv = Scalar(1.0 / (2.0 * sigma * sigma));
  field -= Scalar(amplitude) * (-(x - Scalar(x0)).square() * inv).exp();
}

template <typename Scalar = double>
BasicPotentialField<Scalar> tweezer_potential(const TweezerSpec& spec, const ControlSample& sample,
                                              const SimConfig& config) {
  check_sample_bounds(spec, sample);
  BasicPotentialField<Scalar> field = BasicPotentialField<Scalar>::Zero(config.grid_points);
  add_gaussian(field, grid_positions<Scalar>(config), sample.x0, sample.A, spec.sigma);
  return field;
}

template <typename Scalar>
void check_potential(const BasicPotentialField<Scalar>& v, const SimConfig& config) {
  if (v.size() != config.grid_points)
    throw ArgumentError("potential length does not match the grid");
  if (!v.allFinite()) throw ArgumentError("potential contains non-finite values");
}

}  // namespace qmoves

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "qmoves/errors.hpp"

namespace qmoves {

/// Discretization of the dimensionless 1D domain. Units have hbar = m = 1.
///
/// The grid is periodic: point i sits at domain_min + i*dx and the point at
/// domain_max is identified with domain_min.
struct SimConfig {
  static constexpr double hbar = 1.0;
  static constexpr double mass = 1.0;

  double domain_min = -1.0;
  double domain_max = 1.0;
  int grid_points = 256;
  double dt = 1e-4;

  double length() const { return domain_max - domain_min; }
  double dx() const { return length() / grid_points; }

  void validate() const {
    if (grid_points < 16 || (grid_points & (grid_points - 1)) != 0)
      throw ValidationError("grid_points", "must be a power of two >= 16");
    if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
    if (!(domain_max > domain_min))
      throw ValidationError("domain", "domain_max must exceed domain_min");
  }

  bool operator==(const SimConfig&) const = default;
};

template <typename Scalar>
using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar = double>
RealArray<Scalar> grid_positions(const SimConfig& config) {
  const Eigen::Index n = config.grid_points;
  return RealArray<Scalar>::LinSpaced(n, 0, Scalar(n - 1)) * Scalar(config.dx()) +
         Scalar(config.domain_min);
}

/// Angular wave numbers in FFT order: 0, 1, ..., N/2-1, -N/2, ..., -1 times 2*pi/L.
template <typename Scalar = double>
RealArray<Scalar> wave_numbers(const SimConfig& config) {
  const int n = config.grid_points;
  const Scalar dk = Scalar(2 * std::numbers::pi / config.length());
  RealArray<Scalar> k(n);
  for (int i = 0; i < n; ++i) k[i] = Scalar(i < n / 2 ? i : i - n) * dk;
  return k;
}

// Index of the grid point closest to x, wrapped into [0, N).
inline int nearest_index(const SimConfig& config, double x) {
  const int n = config.grid_points;
  int i = static_cast<int>(std::lround((x - config.domain_min) / config.dx()));
  return ((i % n) + n) % n;
}

}  // namespace qmoves

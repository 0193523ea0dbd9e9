#pragma once

#include <complex>

#include "qmoves/quantum/grid.hpp"

namespace qmoves {

/// Complex amplitudes of the atom on the periodic grid, normalized so that
/// sum |psi_i|^2 dx = 1.
template <typename Scalar = double>
class BasicWaveFunction {
 public:
  using Complex = std::complex<Scalar>;
  using Amplitudes = ComplexVector<Scalar>;

  BasicWaveFunction() = default;
  BasicWaveFunction(SimConfig config, Amplitudes amplitudes)
      : config_(config), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != config_.grid_points)
      throw ArgumentError("wave function length does not match the grid");
  }

  /// Normalized Gaussian packet exp(-(x-center)^2/(4 width^2)) with momentum k.
  static BasicWaveFunction gaussian(const SimConfig& config, double center, double width,
                                    double momentum = 0.0) {
    const auto x = grid_positions<Scalar>(config);
    Amplitudes psi(config.grid_points);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      const Scalar d = x[i] - Scalar(center);
      psi[i] = std::polar(std::exp(-d * d / Scalar(4 * width * width)), Scalar(momentum) * x[i]);
    }
    BasicWaveFunction w(config, std::move(psi));
    w.normalize();
    return w;
  }

  const SimConfig& config() const { return config_; }
  const Amplitudes& amplitudes() const { return amplitudes_; }
  Amplitudes& amplitudes() { return amplitudes_; }
  Eigen::Index size() const { return amplitudes_.size(); }

  Scalar norm_squared() const { return amplitudes_.squaredNorm() * Scalar(config_.dx()); }

  RealArray<Scalar> density() const { return amplitudes_.array().abs2(); }

  void normalize() {
    const Scalar n = norm_squared();
    if (!(n > Scalar(0))) throw ArgumentError("cannot normalize a zero wave function");
    amplitudes_ /= std::sqrt(n);
  }

 private:
  SimConfig config_;
  Amplitudes amplitudes_;
};

using WaveFunction = BasicWaveFunction<double>;

}  // namespace qmoves

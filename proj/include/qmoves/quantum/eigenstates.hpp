#pragma once

#include <vector>

#include "qmoves/quantum/observables.hpp"

namespace qmoves {

template <typename Scalar = double>
struct BasicEigenpair {
  Scalar energy;
  BasicWaveFunction<Scalar> state;
};
using Eigenpair = BasicEigenpair<double>;

enum class KineticStencil {
  /// Periodic Fourier differentiation; the same operator the split-step
  /// propagator exponentiates.
  spectral,
  /// Second-order central difference with periodic wrap.
  central_difference,
};

/// Dense matrix of the kinetic operator -1/2 d^2/dx^2 on the periodic grid.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> kinetic_matrix(
    const SimConfig& config, KineticStencil stencil = KineticStencil::spectral) {
  const int n = config.grid_points;
  const Scalar dx = Scalar(config.dx());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> t =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  if (stencil == KineticStencil::central_difference) {
    const Scalar off = Scalar(-0.5) / (dx * dx);
    for (int i = 0; i < n; ++i) {
      t(i, i) = Scalar(1) / (dx * dx);
      t(i, (i + 1) % n) = off;
      t(i, (i + n - 1) % n) = off;
    }
    return t;
  }
  // Closed form of the periodic spectral second derivative for even n,
  // rescaled from [0, 2pi) to the domain length.
  const Scalar h = Scalar(2 * std::numbers::pi) / Scalar(n);
  const Scalar scale = std::pow(Scalar(2 * std::numbers::pi / config.length()), 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Scalar d2;
      if (i == j) {
        d2 = -Scalar(std::numbers::pi * std::numbers::pi) / (3 * h * h) - Scalar(1) / 6;
      } else {
        const Scalar s = std::sin(Scalar(i - j) * h / 2);
        d2 = ((i - j) % 2 == 0 ? Scalar(-0.5) : Scalar(0.5)) / (s * s);
      }
      t(i, j) = Scalar(-0.5) * scale * d2;
    }
  }
  return t;
}

/// First k eigenpairs of H = T + V by dense diagonalization, energies ascending.
/// States are normalized on the grid; each is signed so that its
/// largest-magnitude amplitude is positive.
template <typename Scalar = double>
std::vector<BasicEigenpair<Scalar>> eigenstates(const BasicPotentialField<Scalar>& v,
                                                const SimConfig& config, int k,
                                                KineticStencil stencil = KineticStencil::spectral) {
  config.validate();
  check_potential(v, config);
  if (k < 1 || k >= config.grid_points)
    throw ArgumentError("eigenstate count must satisfy 1 <= k < N");

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h = kinetic_matrix<Scalar>(config, stencil);
  h.diagonal() += v.matrix();
  Eigen::SelfAdjointEigenSolver<decltype(h)> solver(h);
  if (solver.info() != Eigen::Success) throw Error("eigensolver failed");

  const Scalar norm = Scalar(1) / std::sqrt(Scalar(config.dx()));
  std::vector<BasicEigenpair<Scalar>> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col = solver.eigenvectors().col(i) * norm;
    Eigen::Index peak = 0;
    col.cwiseAbs().maxCoeff(&peak);
    if (col[peak] < 0) col = -col;
    out.push_back({solver.eigenvalues()[i],
                   BasicWaveFunction<Scalar>(config, col.template cast<std::complex<Scalar>>())});
  }
  return out;
}

}  // namespace qmoves

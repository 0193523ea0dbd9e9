#pragma once

#include <unsupported/Eigen/FFT>

#include "qmoves/quantum/potential.hpp"
#include "qmoves/quantum/wave_function.hpp"

namespace qmoves {

/// Strang-split propagator exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2), with the
/// kinetic factor applied exactly in frequency space. Holds its own FFT plan,
/// so one instance must not be shared between threads.
template <typename Scalar = double>
class SplitStepper {
 public:
  using Complex = std::complex<Scalar>;
  using Vector = ComplexVector<Scalar>;

  explicit SplitStepper(const SimConfig& config)
      : config_(config), kinetic_(wave_numbers<Scalar>(config).square() * Scalar(0.5)) {
    buffer_.resize(config.grid_points);
  }

  const SimConfig& config() const { return config_; }

  /// Half kinetic energy k^2/2 per frequency, FFT order.
  const RealArray<Scalar>& kinetic() const { return kinetic_; }

  /// Real-time step of length `dt` under potential `v`.
  void step(Vector& psi, const BasicPotentialField<Scalar>& v, Scalar dt) {
    const Vector half_kick = phase(v * (-dt / 2));
    step_with_kick(psi, half_kick, kinetic_phase(dt));
  }

  void step_with_kick(Vector& psi, const Vector& half_kick, const Vector& drift) {
    psi.array() *= half_kick.array();
    fft_.fwd(buffer_, psi);
    buffer_.array() *= drift.array();
    fft_.inv(psi, buffer_);
    psi.array() *= half_kick.array();
  }

  /// Imaginary-time step exp(-V dt/2) exp(-T dt) exp(-V dt/2); not norm preserving.
  void imaginary_step(Vector& psi, const RealArray<Scalar>& half_decay,
                      const RealArray<Scalar>& kinetic_decay) {
    psi.array() *= half_decay;
    fft_.fwd(buffer_, psi);
    buffer_.array() *= kinetic_decay;
    fft_.inv(psi, buffer_);
    psi.array() *= half_decay;
  }

  Vector kinetic_phase(Scalar dt) const { return phase(kinetic_ * (-dt)); }

  static Vector phase(const RealArray<Scalar>& angle) {
    Vector out(angle.size());
    for (Eigen::Index i = 0; i < angle.size(); ++i) out[i] = std::polar(Scalar(1), angle[i]);
    return out;
  }

  /// <T> for a state normalized on the grid.
  Scalar kinetic_energy(const Vector& psi) {
    fft_.fwd(buffer_, psi);
    // Parseval: sum |psi_i|^2 dx = (dx / N) sum |c_k|^2.
    const Scalar weight = Scalar(config_.dx()) / Scalar(config_.grid_points);
    return (buffer_.array().abs2() * kinetic_).sum() * weight;
  }

 private:
  SimConfig config_;
  RealArray<Scalar> kinetic_;
  Eigen::FFT<Scalar> fft_;
  Vector buffer_;
};

}  // namespace qmoves

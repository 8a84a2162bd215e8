#pragma once

#include <array>
#include <vector>

#include "ferro/field.hpp"

namespace ferro {

/// Time profile with a closed-form derivative.
struct Envelope {
  enum class Kind { constant, exponential, sinusoidal };
  Kind kind = Kind::constant;
  double rate = 0.0;   // exponential: e^{-rate t}
  double omega = 0.0;  // sinusoidal: sin(omega t + phase)
  double phase = 0.0;

  double value(double t) const;
  double derivative(double t) const;

  static Envelope constant() { return {}; }
  static Envelope exponential(double rate) { return {Kind::exponential, rate, 0.0, 0.0}; }
  static Envelope sinusoidal(double omega, double phase) {
    return {Kind::sinusoidal, 0.0, omega, phase};
  }
};

/// One real Fourier pair env(t) (A e^{ik.x} + conj(A) e^{-ik.x}).
struct ForceMode {
  std::array<int, 3> k{};
  Complex amplitude{};
  Envelope envelope;
};

/// External magnetic force F(x, t) and its time derivative.
///
/// Either a sum of analytic modes (time derivative exact), or samples of F and
/// dF/dt on a time grid supplied by the caller and interpolated linearly.
class ExternalField {
 public:
  /// F = 0.
  explicit ExternalField(GridPtr grid);
  /// Throws std::invalid_argument for k = 0 or modes outside the 2/3 band.
  ExternalField(GridPtr grid, std::vector<ForceMode> modes);
  static ExternalField sampled(GridPtr grid, std::vector<double> times,
                               std::vector<ScalarField> F, std::vector<ScalarField> dF_dt);

  const GridPtr& grid() const { return grid_; }
  bool is_zero() const;
  bool is_time_constant() const;
  const std::vector<ForceMode>& modes() const { return modes_; }

  ScalarField at(double t) const;
  ScalarField dt_at(double t) const;

 private:
  ExternalField() = default;
  ScalarField combine(double t, bool derivative) const;
  ScalarField interpolate(double t, const std::vector<ScalarField>& samples) const;

  GridPtr grid_;
  std::vector<ForceMode> modes_;
  std::vector<double> times_;
  std::vector<ScalarField> F_;
  std::vector<ScalarField> dF_;
};

}  // namespace ferro

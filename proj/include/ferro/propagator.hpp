#pragma once

#include <span>
#include <vector>

#include "ferro/field.hpp"

namespace ferro {

/// Damped heat semigroup e^{-t(gamma - mu Delta)}, symbol e^{-t(gamma + mu |k|^2)}.
struct PropagatorSpec {
  double gamma = 0.0;  // damping rate, 1/time
  double mu = 1.0;     // diffusivity, length^2/time

  double rate(double k2) const { return gamma + mu * k2; }
};

/// phi_1(z) = (e^z - 1)/z, phi_2(z) = (e^z - 1 - z)/z^2, accurate for all z <= 0.
double phi1(double z);
double phi2(double z);

/// Per-mode exponential-integrator weights for one step of length h:
/// decay = e^{-lambda h}, w1 = h phi_1(-lambda h), w2 = h phi_2(-lambda h).
struct StepWeights {
  std::vector<double> decay;
  std::vector<double> w1;
  std::vector<double> w2;
};
StepWeights step_weights(const PropagatorSpec& spec, const Grid& g, double h);

ScalarField propagator_apply(const PropagatorSpec& spec, double t, const ScalarField& v);
VectorField propagator_apply(const PropagatorSpec& spec, double t, const VectorField& v);

/// Fourier multiplier (|k|^2 / (gamma + mu |k|^2))^{alpha/2}.
VectorField damping_multiplier_apply(double gamma, double mu, double alpha, const VectorField& v);
ScalarField damping_multiplier_apply(double gamma, double mu, double alpha, const ScalarField& v);

/// Duhamel integral w(t_i) = int_0^{t_i} S(t_i - s) F(s) ds at every node.
///
/// Each coefficient of the forcing is interpolated linearly in time between
/// nodes and integrated against e^{-lambda (t - s)} exactly, so the result is
/// exact for piecewise-linear forcing whatever the stiffness lambda * dt.
std::vector<VectorField> duhamel_convolve(const PropagatorSpec& spec, std::span<const double> times,
                                          std::span<const VectorField> forcing);
std::vector<ScalarField> duhamel_convolve(const PropagatorSpec& spec, std::span<const double> times,
                                          std::span<const ScalarField> forcing);

}  // namespace ferro

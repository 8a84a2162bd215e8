#pragma once

#include <limits>
#include <span>
#include <vector>

#include "ferro/field.hpp"

namespace ferro {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Homogeneous Sobolev norm ( sum_{k != 0} |k|^{2s} |v(k)|^2 L^3 )^{1/2}.
///
/// The box-volume factor makes s = 0 coincide with the physical L^2 norm.
/// Modes without a wavenumber (mean, Nyquist) are excluded, so any real s is
/// admissible. The sum runs in a fixed order, so results are reproducible.
double hs_norm(const ScalarField& v, double s);
double hs_norm(const VectorField& v, double s);

/// L^2 norm by trapezoidal (equal-weight) quadrature of physical samples.
double l2_quadrature(const PhysicalScalar& v, const Grid& g);
double l2_quadrature(const PhysicalVector& v, const Grid& g);

/// ( int |f(t)|^p dt )^{1/p} by the composite trapezoid rule on the sample
/// times; p = kInfinity returns the maximum sample. Throws on empty input.
double lp_time_norm(std::span<const double> times, std::span<const double> values, double p);

/// L^p_T Hdot^s norm of a sampled field trajectory.
double lpt_hs_norm(std::span<const double> times, std::span<const VectorField> series, double p,
                   double s);
double lpt_hs_norm(std::span<const double> times, std::span<const ScalarField> series, double p,
                   double s);

}  // namespace ferro

#pragma once

#include "ferro/field.hpp"

namespace ferro {

/// Relative size below which a mean coefficient counts as rounding noise.
inline constexpr double kMeanTolerance = 1e-12;

/// Throws SolvabilityError when the k = 0 coefficient is not negligible.
void require_mean_free(const ScalarField& a, const char* where);
void require_mean_free(const VectorField& a, const char* where);

VectorField gradient(const ScalarField& a);
ScalarField divergence(const VectorField& v);
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& a);
VectorField laplacian(const VectorField& v);

/// Leray projector P = 1 - Delta^-1 grad div onto divergence-free fields.
VectorField leray_project(const VectorField& v);
/// Gradient part Q = Delta^-1 grad div; P + Q = 1.
VectorField gradient_part(const VectorField& v);
/// grad Delta^-1 F: coefficient (i k / -|k|^2) F(k).
VectorField inv_laplacian_gradient(const ScalarField& F);

/// max_k |k . v(k)| / |k|, the coefficient divergence residual.
double divergence_residual(const VectorField& v);
/// max_k |k x v(k)| / |k|, the coefficient curl residual.
double curl_residual(const VectorField& v);

}  // namespace ferro

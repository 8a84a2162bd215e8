#pragma once

#include "ferro/field.hpp"

namespace ferro {

/// Pseudo-spectral products. Operands are synthesized on the grid, multiplied
/// pointwise, analysed again and masked (mean, Nyquist and, when the grid
/// dealiases, everything outside the 2/3 band are dropped).
enum class ProductKind {
  advection,   // (a . grad) b
  cross,       // a x b
  curl_cross,  // (curl a) x b
  triple,      // a x (b x c), as two masked binary cross products (inner keeps its mean)
};

VectorField physical_product(ProductKind kind, const VectorField& a, const VectorField& b);
VectorField physical_product(ProductKind kind, const VectorField& a, const VectorField& b,
                             const VectorField& c);

VectorField advection(const VectorField& a, const VectorField& b);
/// With keep_mean the k = 0 coefficient survives the mask, for products that
/// feed another product rather than an equation.
VectorField cross(const VectorField& a, const VectorField& b, bool keep_mean = false);
VectorField curl_cross(const VectorField& a, const VectorField& b);
VectorField triple(const VectorField& a, const VectorField& b, const VectorField& c);
/// s * v for a scalar s.
VectorField scalar_times(const ScalarField& s, const VectorField& v);

}  // namespace ferro

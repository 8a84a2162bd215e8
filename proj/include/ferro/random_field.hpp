#pragma once

#include <cstdint>

#include "ferro/field.hpp"

namespace ferro {

enum class Sector { any, solenoidal, gradient };

/// Band-limited Hermitian random field: independent Gaussian coefficients on
/// the 2/3 band with amplitude |k|^-s_decay, all other modes zero.
ScalarField random_scalar(const GridPtr& g, std::uint64_t seed, double s_decay = 2.0);
VectorField random_vector(const GridPtr& g, std::uint64_t seed, double s_decay = 2.0,
                          Sector sector = Sector::any);

/// random_vector rescaled so that its Hdot^{1/2} norm equals amplitude.
VectorField random_band(const GridPtr& g, std::uint64_t seed, double s_decay, double amplitude,
                        Sector sector);

}  // namespace ferro

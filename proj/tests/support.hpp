#pragma once

#include <cmath>
#include <numbers>

#include "ferro/field.hpp"
#include "ferro/grid.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// A single real Fourier pair c e^{ik.x} + conj(c) e^{-ik.x} in one component.
inline void set_mode(const ferro::Grid& g, ferro::Coefficients& c, int k1, int k2, int k3,
                     ferro::Complex amp) {
  const std::size_t f = g.flat_of_mode(k1, k2, k3);
  c[f] = amp;
  c[g.conjugate_index(f)] = std::conj(amp);
}

}  // namespace testing

#include "ferro/random_field.hpp"
#include "ferro/state_model.hpp"

namespace testing {

inline ferro::State random_state(const ferro::GridPtr& g, std::uint64_t seed, double scale = 1.0) {
  using namespace ferro;
  State s(random_vector(g, 3 * seed, 2.0, Sector::solenoidal),
          random_vector(g, 3 * seed + 1, 2.0, Sector::solenoidal),
          random_vector(g, 3 * seed + 2, 2.0, Sector::gradient));
  s *= scale;
  return s;
}

}  // namespace testing

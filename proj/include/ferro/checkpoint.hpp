#pragma once

#include <string>

#include "ferro/params.hpp"
#include "ferro/state_model.hpp"

namespace ferro {

/// Binary checkpoint of a reformulated state.
///
/// Layout, all little-endian:
///   char[8]  magic "FERROCK1"
///   uint32   format version (1)
///   uint32   n (modes per axis)
///   float64  box length
///   uint8    dealias flag, followed by 7 zero bytes
///   float64  nu, sigma, tau, chi0, time
///   body     9 arrays (u1 u2 u3 m1 m2 m3 r1 r2 r3), each n^3 coefficients in
///            flat row-major order stored as (re, im) float64 pairs.
struct Checkpoint {
  State state;
  Params params;
  double time = 0.0;
};

void write_checkpoint(const std::string& path, const State& s, const Params& p, double time);
/// Throws std::runtime_error on a malformed or truncated file.
Checkpoint read_checkpoint(const std::string& path);

}  // namespace ferro

#pragma once

#include <string>

#include "json.hpp"

#include "ferro/integrator.hpp"

namespace ferro {

/// Norm time series, one row per node:
/// t, hs12_u, hs12_m, hs12_r, hs1_u, hs1_m, hs1_r, l4t_h1_running.
std::string norms_csv(const SolveReport& r);

/// Write text to path, creating parent directories. Throws on I/O failure.
void write_text(const std::string& path, const std::string& text);
/// Pretty-printed JSON with a trailing newline.
void write_json(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace ferro

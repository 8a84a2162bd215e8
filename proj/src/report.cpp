#include "ferro/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace ferro {

namespace {
void append(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}
}  // namespace

std::string norms_csv(const SolveReport& r) {
  std::string out = "t,hs12_u,hs12_m,hs12_r,hs1_u,hs1_m,hs1_r,l4t_h1_running\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double row[] = {r.times[i], r.hs12_u[i], r.hs12_m[i], r.hs12_r[i],
                          r.hs1_u[i],  r.hs1_m[i],  r.hs1_r[i],  r.l4t_h1_running[i]};
    for (std::size_t c = 0; c < 8; ++c) {
      if (c) out += ',';
      append(out, row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace ferro

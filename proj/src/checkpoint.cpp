#include "ferro/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ferro {

namespace {
constexpr char kMagic[8] = {'F', 'E', 'R', 'R', 'O', 'C', 'K', '1'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw std::runtime_error("checkpoint: truncated file");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}
}  // namespace

void write_checkpoint(const std::string& path, const State& s, const Params& p, double time) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  const Grid& g = *s.grid();
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  put<double>(out, g.box_length());
  put<std::uint8_t>(out, g.dealias() ? 1 : 0);
  for (int i = 0; i < 7; ++i) put<std::uint8_t>(out, 0);
  for (double v : {p.nu, p.sigma, p.tau, p.chi0, time}) put<double>(out, v);
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d)
      for (const Complex& z : s[c].comp[d]) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
      }
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("checkpoint: bad magic in " + path);
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }
  const auto n = get<std::uint32_t>(in);
  const double box = get<double>(in);
  const bool dealias = get<std::uint8_t>(in) != 0;
  for (int i = 0; i < 7; ++i) get<std::uint8_t>(in);
  Checkpoint cp;
  cp.params.nu = get<double>(in);
  cp.params.sigma = get<double>(in);
  cp.params.tau = get<double>(in);
  cp.params.chi0 = get<double>(in);
  cp.time = get<double>(in);
  if (n < 4 || n > 4096) throw std::runtime_error("checkpoint: implausible grid size");
  cp.state = State(make_grid(static_cast<int>(n), box, dealias));
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d)
      for (Complex& z : cp.state[c].comp[d]) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        z = Complex(re, im);
      }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("checkpoint: trailing bytes in " + path);
  }
  return cp;
}

}  // namespace ferro

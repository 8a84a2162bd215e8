#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "doctest.h"
#include "ferro/checkpoint.hpp"
#include "ferro/integrator.hpp"
#include "support.hpp"

using namespace ferro;

namespace {
std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}
}  // namespace

TEST_CASE("checkpoint round trip is bit exact") {
  auto g = make_grid(8, 3.0, false);
  const State s = testing::random_state(g, 21);
  const Params p{0.3, 0.4, 1e-3, 2.5};
  const std::string path = temp_path("ferro_ck_roundtrip.bin");
  write_checkpoint(path, s, p, 0.625);

  const auto bytes = slurp(path);
  const std::size_t header = 8 + 4 + 4 + 8 + 8 + 5 * 8;
  CHECK(bytes.size() == header + 9 * g->size() * 16);
  CHECK(std::memcmp(bytes.data(), "FERROCK1", 8) == 0);

  const Checkpoint c = read_checkpoint(path);
  CHECK(c.time == 0.625);
  CHECK(c.params.nu == p.nu);
  CHECK(c.params.sigma == p.sigma);
  CHECK(c.params.tau == p.tau);
  CHECK(c.params.chi0 == p.chi0);
  CHECK(c.state.grid()->n() == 8);
  CHECK(c.state.grid()->box_length() == 3.0);
  CHECK_FALSE(c.state.grid()->dealias());
  CHECK(max_abs_diff(c.state, s) == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("restart from a checkpoint continues the run") {
  auto g = make_grid(8);
  const Params p{1.0, 1.0, 0.1, 1.0};
  const State U0 = testing::random_state(g, 5, 0.3);
  const ExternalField F(g);
  const auto full = simulate(U0, F, p, {0.2, 20});
  const std::string path = temp_path("ferro_ck_restart.bin");
  write_checkpoint(path, full.trajectory[10], p, 0.1);
  const Checkpoint c = read_checkpoint(path);
  const auto rest = simulate(c.state, F, c.params, {0.1, 10});
  CHECK(max_abs_diff(rest.trajectory.back(), full.trajectory.back()) < 1e-15);
  std::remove(path.c_str());
}

TEST_CASE("malformed checkpoints are rejected") {
  auto g = make_grid(4);
  const std::string path = temp_path("ferro_ck_bad.bin");
  write_checkpoint(path, State(g), Params{1, 1, 1, 1}, 0.0);
  const auto good = slurp(path);

  auto bad = good;
  bad[0] = 'X';
  spit(path, bad);
  CHECK_THROWS_WITH_AS(read_checkpoint(path), doctest::Contains("magic"), std::runtime_error);

  bad = good;
  bad[8] = 2;
  spit(path, bad);
  CHECK_THROWS_WITH_AS(read_checkpoint(path), doctest::Contains("version"), std::runtime_error);

  bad = good;
  bad.resize(good.size() - 3);
  spit(path, bad);
  CHECK_THROWS_AS(read_checkpoint(path), std::runtime_error);

  bad = good;
  bad.push_back(0);
  spit(path, bad);
  CHECK_THROWS_AS(read_checkpoint(path), std::runtime_error);

  CHECK_THROWS_AS(read_checkpoint(temp_path("ferro_ck_missing.bin")), std::runtime_error);
  std::remove(path.c_str());
}

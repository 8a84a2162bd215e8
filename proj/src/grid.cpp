#include "ferro/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>

namespace ferro {

namespace {
// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

TransformCount& transform_counter() {
  thread_local TransformCount counter;
  return counter;
}

Transform::Transform(int n) : n_(n) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  const std::size_t size = static_cast<std::size_t>(n) * n * n;
  fftw_complex* buffer = fftw_alloc_complex(size);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_3d(n, n, n, buffer, buffer, FFTW_FORWARD, flags);
  inverse_plan_ = fftw_plan_dft_3d(n, n, n, buffer, buffer, FFTW_BACKWARD, flags);
  fftw_free(buffer);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    throw std::runtime_error("FFTW plan creation failed for n = " + std::to_string(n));
  }
}

Transform::~Transform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void Transform::forward(Complex* data) const {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), d, d);
  const std::size_t size = static_cast<std::size_t>(n_) * n_ * n_;
  const double scale = 1.0 / static_cast<double>(size);
  for (std::size_t i = 0; i < size; ++i) data[i] *= scale;
  ++transform_counter().forward;
}

void Transform::inverse(Complex* data) const {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), d, d);
  ++transform_counter().inverse;
}

Grid::Grid(int n, double box_length, bool dealias)
    : n_(n), box_length_(box_length), dealias_(dealias) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("grid.n must be an even integer >= 4, got " + std::to_string(n));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw std::invalid_argument("grid.box_length must be positive");
  }
  size_ = static_cast<std::size_t>(n) * n * n;
  k_.resize(size_);
  k2_.resize(size_);
  nyquist_.assign(size_, false);
  kept_.assign(size_, false);
  band_.assign(size_, false);

  const double scale = 2.0 * std::numbers::pi / box_length;
  const int half = n / 2;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const std::size_t f = flat(i, j, l);
        const std::array<int, 3> idx{i, j, l};
        std::array<double, 3> kv{};
        bool nyq = false;
        bool band = true;
        for (int d = 0; d < 3; ++d) {
          const int m = mode_number(idx[d]);
          if (idx[d] == half) {
            nyq = true;
            kv[d] = 0.0;
          } else {
            kv[d] = scale * m;
          }
          if (3 * std::abs(m) >= n) band = false;
        }
        k_[f] = kv;
        k2_[f] = nyq ? 0.0 : kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
        nyquist_[f] = nyq;
        band_[f] = band && !nyq && f != 0;
        kept_[f] = !nyq && f != 0 && (!dealias || band);
      }
    }
  }
  transform_ = std::make_unique<Transform>(n);
}

std::size_t Grid::flat_of_mode(int k1, int k2, int k3) const {
  const int half = n_ / 2;
  auto index = [&](int m) {
    if (std::abs(m) >= half) {
      throw std::out_of_range("wavevector component " + std::to_string(m) +
                              " not representable below the Nyquist mode for n = " +
                              std::to_string(n_));
    }
    return m >= 0 ? m : m + n_;
  };
  return flat(index(k1), index(k2), index(k3));
}

std::size_t Grid::conjugate_index(std::size_t f) const {
  const std::size_t nn = static_cast<std::size_t>(n_);
  const int i = static_cast<int>(f / (nn * nn));
  const int j = static_cast<int>((f / nn) % nn);
  const int l = static_cast<int>(f % nn);
  auto neg = [&](int a) { return a == 0 ? 0 : n_ - a; };
  return flat(neg(i), neg(j), neg(l));
}

GridPtr make_grid(int n, double box_length, bool dealias) {
  return std::make_shared<const Grid>(n, box_length, dealias);
}

}  // namespace ferro

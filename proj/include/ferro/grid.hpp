#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

namespace ferro {

using Complex = std::complex<double>;

/// In-place 3-D complex FFT on an n^3 array, row-major with x1 slowest.
///
/// forward() computes analysis coefficients c(k) = n^-3 sum_x f(x) e^{-ik.x},
/// inverse() the synthesis f(x) = sum_k c(k) e^{ik.x}. A single plan pair is
/// shared by every field on the grid; execution goes through the new-array
/// interface so concurrent calls on distinct buffers are safe.
class Transform {
 public:
  explicit Transform(int n);
  ~Transform();
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  void forward(Complex* data) const;
  void inverse(Complex* data) const;

 private:
  int n_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Per-thread transform counter used by the nonlinear budget instrumentation.
struct TransformCount {
  long forward = 0;
  long inverse = 0;
  long products = 0;
};
TransformCount& transform_counter();

/// Periodic box [0, L)^3 with n modes per axis.
///
/// Integer wavevectors run over {-n/2+1, ..., n/2}; the Nyquist index n/2
/// carries no derivative (its wavenumber is treated as 0 by every operator),
/// and fields produced by the library keep it empty. The dealias mask keeps
/// 3|k_i| < n on every axis, which makes binary products of masked fields
/// exact on the kept modes.
class Grid {
 public:
  Grid(int n, double box_length = 2.0 * std::numbers::pi, bool dealias = true);

  int n() const { return n_; }
  double box_length() const { return box_length_; }
  bool dealias() const { return dealias_; }
  std::size_t size() const { return size_; }
  double volume() const { return box_length_ * box_length_ * box_length_; }
  double spacing() const { return box_length_ / n_; }

  std::size_t flat(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + l;
  }
  /// Integer mode number of array index idx (Nyquist reported as +n/2).
  int mode_number(int idx) const { return idx <= n_ / 2 ? idx : idx - n_; }
  /// Array index holding integer wavevector (k1, k2, k3); requires |k_i| < n/2.
  std::size_t flat_of_mode(int k1, int k2, int k3) const;
  /// Array index of -k, the Hermitian partner of flat index f.
  std::size_t conjugate_index(std::size_t f) const;

  const std::array<double, 3>& k(std::size_t f) const { return k_[f]; }
  double k2(std::size_t f) const { return k2_[f]; }
  bool is_mean(std::size_t f) const { return f == 0; }
  bool is_nyquist(std::size_t f) const { return nyquist_[f]; }
  /// Kept by the product mask: not mean, not Nyquist, inside the 2/3 band
  /// when dealiasing is on.
  bool kept(std::size_t f) const { return kept_[f]; }
  /// Inside the 2/3 band regardless of the dealias flag.
  bool in_band(std::size_t f) const { return band_[f]; }

  const Transform& transform() const { return *transform_; }

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && box_length_ == other.box_length_ && dealias_ == other.dealias_;
  }

 private:
  int n_;
  double box_length_;
  bool dealias_;
  std::size_t size_;
  std::vector<std::array<double, 3>> k_;
  std::vector<double> k2_;
  std::vector<bool> nyquist_;
  std::vector<bool> kept_;
  std::vector<bool> band_;
  std::unique_ptr<Transform> transform_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int n, double box_length = 2.0 * std::numbers::pi, bool dealias = true);

}  // namespace ferro

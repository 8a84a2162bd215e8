#include "ferro/external_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ferro/operators.hpp"

namespace ferro {

double Envelope::value(double t) const {
  switch (kind) {
    case Kind::constant: return 1.0;
    case Kind::exponential: return std::exp(-rate * t);
    case Kind::sinusoidal: return std::sin(omega * t + phase);
  }
  return 0.0;
}

double Envelope::derivative(double t) const {
  switch (kind) {
    case Kind::constant: return 0.0;
    case Kind::exponential: return -rate * std::exp(-rate * t);
    case Kind::sinusoidal: return omega * std::cos(omega * t + phase);
  }
  return 0.0;
}

ExternalField::ExternalField(GridPtr grid) : grid_(std::move(grid)) {}

ExternalField::ExternalField(GridPtr grid, std::vector<ForceMode> modes)
    : grid_(std::move(grid)), modes_(std::move(modes)) {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto& k = modes_[i].k;
    const std::string key = "external_field.modes[" + std::to_string(i) + "].k";
    if (k[0] == 0 && k[1] == 0 && k[2] == 0) {
      throw std::invalid_argument(key + ": the mean mode is not allowed (F must be mean-free)");
    }
    std::size_t f = 0;
    try {
      f = grid_->flat_of_mode(k[0], k[1], k[2]);
    } catch (const std::out_of_range&) {
      throw std::invalid_argument(key + ": wavevector not resolved by the grid");
    }
    if (!grid_->in_band(f)) {
      throw std::invalid_argument(key + ": wavevector outside the dealiased band 3|k_i| < n");
    }
    if (!std::isfinite(modes_[i].amplitude.real()) || !std::isfinite(modes_[i].amplitude.imag())) {
      throw std::invalid_argument("external_field.modes[" + std::to_string(i) +
                                  "].amplitude must be finite");
    }
  }
}

ExternalField ExternalField::sampled(GridPtr grid, std::vector<double> times,
                                     std::vector<ScalarField> F, std::vector<ScalarField> dF_dt) {
  if (times.empty() || times.size() != F.size() || times.size() != dF_dt.size()) {
    throw std::invalid_argument("sampled external field: samples must match the time grid");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("sampled external field: times must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < F.size(); ++i) {
    require_same_grid(grid, F[i].grid, "sampled external field");
    require_same_grid(grid, dF_dt[i].grid, "sampled external field");
    require_mean_free(F[i], "sampled external field");
    require_mean_free(dF_dt[i], "sampled external field");
  }
  ExternalField out;
  out.grid_ = std::move(grid);
  out.times_ = std::move(times);
  out.F_ = std::move(F);
  out.dF_ = std::move(dF_dt);
  return out;
}

bool ExternalField::is_zero() const {
  if (!times_.empty()) {
    return std::all_of(F_.begin(), F_.end(), [](const ScalarField& s) { return max_abs(s) == 0.0; }) &&
           std::all_of(dF_.begin(), dF_.end(), [](const ScalarField& s) { return max_abs(s) == 0.0; });
  }
  return std::all_of(modes_.begin(), modes_.end(),
                     [](const ForceMode& m) { return m.amplitude == Complex{}; });
}

bool ExternalField::is_time_constant() const {
  if (!times_.empty()) {
    for (std::size_t i = 1; i < F_.size(); ++i)
      if (max_abs_diff(F_[i], F_[0]) != 0.0) return false;
    return std::all_of(dF_.begin(), dF_.end(), [](const ScalarField& s) { return max_abs(s) == 0.0; });
  }
  return std::all_of(modes_.begin(), modes_.end(), [](const ForceMode& m) {
    return m.envelope.kind == Envelope::Kind::constant || m.amplitude == Complex{};
  });
}

ScalarField ExternalField::combine(double t, bool derivative) const {
  ScalarField out(grid_);
  for (const auto& mode : modes_) {
    const double e = derivative ? mode.envelope.derivative(t) : mode.envelope.value(t);
    const std::size_t f = grid_->flat_of_mode(mode.k[0], mode.k[1], mode.k[2]);
    const std::size_t c = grid_->conjugate_index(f);
    out.coef[f] += e * mode.amplitude;
    out.coef[c] += e * std::conj(mode.amplitude);
  }
  return out;
}

ScalarField ExternalField::interpolate(double t, const std::vector<ScalarField>& s) const {
  if (t <= times_.front()) return s.front();
  if (t >= times_.back()) return s.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
  if (w == 0.0) return s[i];
  ScalarField out = s[i];
  out *= 1.0 - w;
  for (std::size_t f = 0; f < out.coef.size(); ++f) out.coef[f] += w * s[i + 1].coef[f];
  return out;
}

ScalarField ExternalField::at(double t) const {
  return times_.empty() ? combine(t, false) : interpolate(t, F_);
}

ScalarField ExternalField::dt_at(double t) const {
  return times_.empty() ? combine(t, true) : interpolate(t, dF_);
}

}  // namespace ferro

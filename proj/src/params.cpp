#include "ferro/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ferro {

void Params::validate() const {
  auto check = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(key) + " must be a positive finite number");
    }
  };
  check(nu, "params.nu");
  check(sigma, "params.sigma");
  check(tau, "params.tau");
  check(chi0, "params.chi0");
}

}  // namespace ferro

#include "oamlab/lg_modes.hpp"

#include "oamlab/errors.hpp"
#include "oamlab/specfun.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace oamlab {

double radial_profile(const OamMode& mode, double r) {
    if (!(mode.w0 > 0.0)) throw DomainError("radial_profile: w0 must be positive");
    if (!(r >= 0.0)) throw DomainError("radial_profile: r must be non-negative");
    const int l = std::abs(mode.l0);
    if (r == 0.0) return l == 0 ? 2.0 / mode.w0 : 0.0;
    const double u = r / mode.w0;
    const double log_value = std::log(2.0 / mode.w0) - 0.5 * ln_gamma(l + 1.0) +
                             l * std::log(std::numbers::sqrt2 * u) - u * u;
    if (log_value < -745.0) return 0.0;
    return std::exp(log_value);
}

double xi(int l0, double w0) {
    if (l0 == 0) throw DomainError("xi: undefined for l0 = 0");
    if (!(w0 > 0.0)) throw DomainError("xi: w0 must be positive");
    const double l = std::abs(l0);
    return std::sin(std::numbers::pi / (2.0 * l)) * w0 / std::numbers::sqrt2 *
           std::exp(ln_gamma(l + 1.5) - ln_gamma(l + 1.0));
}

double xi_asymptotic(int l0, double w0) {
    if (l0 < 1) throw DomainError("xi_asymptotic: l0 must be positive");
    return std::numbers::pi / (2.0 * std::numbers::sqrt2) * w0 / std::sqrt(static_cast<double>(l0));
}

}  // namespace oamlab

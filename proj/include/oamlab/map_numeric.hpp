#pragma once

#include "oamlab/amplitudes.hpp"
#include "oamlab/turbulence.hpp"

namespace oamlab {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-16;
    double rho_window = 10.0;         ///< radial half-width in units of the peak width
    int theta_points_per_period = 12; ///< angular panels per oscillation period
    int max_subdivisions = 200'000;
    bool full_period = false;         ///< integrate theta over [0, 2pi] and report the imaginary part

    void validate() const;
};

struct MapElement {
    double value = 0.0;
    double imag = 0.0;        ///< zero by symmetry unless full_period is set
    double err = 0.0;
    bool noise_floor = false; ///< |value| < max(10 err, abs_tol)
    long evaluations = 0;
};

/// Diagonal map element for input mode l0 (p = 0) and output index l1:
///   (2^{l0+1} / (pi l0!)) int_0^inf drho int_0^{2pi} dtheta e^{i theta (l1-l0)}
///       exp[(2 l0 + 1) ln rho - 2 rho^2 - d(theta) rho^alpha],
///   d(theta) = 2^{alpha-1} gamma t^alpha sin^alpha(theta/2).
/// Throws ConvergenceError when the adaptive angular integral does not converge.
MapElement lambda_diag(int l1, int l0, const TurbulenceParams& params, const QuadratureConfig& cfg = {});

/// a = lambda_diag(l0), b = lambda_diag(-l0), b_tilde = b / a. When b is at the noise
/// floor, b is replaced by the bound |b| + err and noise_floor is set.
AmplitudePair amplitudes_numeric(int l0, const TurbulenceParams& params, const QuadratureConfig& cfg = {});

}  // namespace oamlab

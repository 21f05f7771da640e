#pragma once

namespace oamlab {

/// Laguerre-Gauss mode with radial index 0.
struct OamMode {
    int l0 = 1;
    double w0 = 1.0;
    double phi = 0.0;  ///< relative phase of the input two-photon state; not used by concurrence

    static constexpr int p = 0;
};

/// R_{0,l}(r) = (2/w0) sqrt(1/|l|!) (sqrt2 r/w0)^|l| exp(-r^2/w0^2), normalised so that
/// the integral of R^2 r dr over [0, inf) is 1. Returns 0 where the log value underflows.
double radial_profile(const OamMode& mode, double r);

/// Phase correlation length sin(pi/2|l0|) (w0/sqrt2) Gamma(|l0|+3/2)/Gamma(|l0|+1).
/// Throws DomainError for l0 = 0.
double xi(int l0, double w0 = 1.0);

/// Large-l0 form (pi / 2 sqrt2) w0 / sqrt(l0).
double xi_asymptotic(int l0, double w0 = 1.0);

}  // namespace oamlab

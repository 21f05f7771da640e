#pragma once

#include "oamlab/turbulence.hpp"

namespace oamlab {

struct UniversalPoint {
    double x = 0.0;  ///< xi / r0
    double b_tilde = 0.0;
    double concurrence = 1.0;
    Exponent alpha{};
};

inline constexpr int kRepresentativeL0 = 10'000;

/// Universal relative crosstalk as a function of x = xi/r0 for alpha in {1, 5/3, 2}.
/// alpha = 5/3 is evaluated through the contour integral at a large representative
/// l0 with t = 2 sqrt(2 l0) x / pi. Throws DomainError for other exponents.
double btilde_universal(double x, const Exponent& alpha, double gamma = kGamma, int l0_star = kRepresentativeL0);

/// Leading small-x law: coefficient x^exponent, or exp(-pi^2 / (coefficient x^2)) for alpha = 2.
struct LeadingLaw {
    bool exponential = false;
    double coefficient = 0.0;
    double exponent = 0.0;
};

LeadingLaw leading_law(const Exponent& alpha, double gamma = kGamma);
double btilde_leading(double x, const Exponent& alpha, double gamma = kGamma);

/// Universal Watson series in x (alpha != 1, 2), truncated after n_terms.
double btilde_series_universal(double x, const Exponent& alpha, int n_terms = 3, double gamma = kGamma);

/// C = max(0, (1 - 2 b) / (1 + b)^2).
double concurrence(double b_tilde);

/// The inverse of concurrence on b_tilde in [0, 1/2]; C = 0 maps to 1/2.
double btilde_from_concurrence(double c);

/// g(x) = exp(-4.16 x^3.24), a reference fit of the alpha = 5/3 concurrence decay.
double leonhard_fit(double x);

/// x at which the universal b_tilde reaches 1/2 (concurrence vanishes).
double death_point(const Exponent& alpha, double gamma = kGamma);

UniversalPoint universal_point(double x, const Exponent& alpha, double gamma = kGamma);

}  // namespace oamlab

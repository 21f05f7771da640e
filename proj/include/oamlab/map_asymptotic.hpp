#pragma once

#include "oamlab/amplitudes.hpp"
#include "oamlab/turbulence.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace oamlab {

/// Parameters of the large-l0 reduced integrals. The crosstalk amplitude is
///   b = (1/pi) Re e^{i beta} int_0^inf exp(-q x^alpha - s x) dx
/// with q = A e^{i alpha beta} and s = 2 i l0 e^{i beta}.
struct AsymptoticContext {
    int l0 = 1;
    TurbulenceParams params{};
    double A = 0.0;  ///< 2^{-alpha-1} gamma (2 l0)^{alpha/2} t^alpha
    double beta = 0.0;
    std::complex<double> q{};
    std::complex<double> s{};
    int n_terms = 3;
};

/// Default rotation angle: -pi/5 for alpha = 5/3, otherwise -pi/(2 + 2 alpha).
double default_beta(const Exponent& alpha);

/// Builds the context. Throws DomainError when Re q <= 0 or Re s <= 0.
AsymptoticContext make_context(int l0, const TurbulenceParams& params, std::optional<double> beta = std::nullopt,
                               int n_terms = 3);

/// a ~ (1/pi) A^{-1/alpha} Gamma(1 + 1/alpha). Infinite at t = 0.
double a_asym(int l0, const TurbulenceParams& params);

/// Closed forms for alpha = 1 and alpha = 2, the rotated contour otherwise.
double b_asym(const AsymptoticContext& ctx);

struct ContourResult {
    double b = 0.0;
    double err = 0.0;
};

/// b from the rotated-contour integral for any alpha in [1, 2).
ContourResult b_contour(const AsymptoticContext& ctx);

/// a_asym, b_asym and their ratio. `advisory` is set when a_asym > 1.
AmplitudePair amplitudes_asymptotic(int l0, const TurbulenceParams& params,
                                    std::optional<double> beta = std::nullopt);

/// One Watson-lemma term of b_tilde: coefficient * (t^2/l0)^power, or in the
/// rescaled variable xi/r0: xi_coefficient * (xi/r0)^xi_power.
struct SeriesCoefficient {
    int n = 0;
    double coefficient = 0.0;
    double power = 0.0;
    double xi_coefficient = 0.0;
    double xi_power = 0.0;
    double envelope = 0.0;  ///< |coefficient| without the cosine factor
};

/// Terms n = 1..n_terms of the Watson series of b_tilde.
std::vector<SeriesCoefficient> watson_coefficients(const Exponent& alpha, int n_terms, double gamma = kGamma);

struct SeriesResult {
    double b_tilde = 0.0;
    std::vector<double> terms;  ///< signed terms at (l0, t)
    bool diverging = false;     ///< a term envelope grew before the truncation order
    int growth_onset = 0;       ///< first n whose envelope exceeds the previous one (0 if none up to n_max)
};

/// b_tilde from the first n_terms terms of the series.
SeriesResult b_series(int l0, const TurbulenceParams& params, int n_terms = 3);

/// First order n at which |T_n| > |T_{n-1}| for the term envelopes; 0 if none below n_max.
int series_growth_onset(int l0, const TurbulenceParams& params, int n_max = 60);

/// Exact amplitudes for alpha = 2 via Gauss hypergeometric functions, with tau = gamma t^2
/// and z = (tau / (2 + tau))^2:
///   a = 2^{l0+1} (2+tau)^{-l0-1} F((l0+1)/2, (l0+2)/2; 1; z)
///   b = 2^{l0+1} (2+tau)^{-3l0-1} (tau/2)^{2l0} C(3l0, l0) F((3l0+1)/2, (3l0+2)/2; 2l0+1; z)
/// `advisory` marks points outside the validated envelope l0 <= 50, t <= 2.
AmplitudePair exact_quadratic(int l0, const TurbulenceParams& params);

}  // namespace oamlab

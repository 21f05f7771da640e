#include "oamlab/universal.hpp"

#include "oamlab/errors.hpp"
#include "oamlab/map_asymptotic.hpp"

#include <cmath>
#include <numbers>

namespace oamlab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_canonical(const Exponent& alpha) {
    if (!alpha.is_linear() && !alpha.is_kolmogorov() && !alpha.is_quadratic())
        throw DomainError("universal forms exist only for alpha in {1, 5/3, 2}, got " + alpha.to_string());
}

}  // namespace

double btilde_universal(double x, const Exponent& alpha, double gamma, int l0_star) {
    require_canonical(alpha);
    if (!(x >= 0.0)) throw DomainError("btilde_universal: x must be non-negative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (alpha.is_linear()) {
        const double g = 0.5 * gamma * x;
        return g * g / (kPi * kPi + g * g);
    }
    if (alpha.is_quadratic()) return std::exp(-kPi * kPi / (2.0 * gamma * x * x));

    const double t = 2.0 * std::numbers::sqrt2 * std::sqrt(static_cast<double>(l0_star)) * x / kPi;
    TurbulenceParams params = TurbulenceParams::from_strength(alpha, t);
    params.gamma = gamma;
    const AsymptoticContext ctx = make_context(l0_star, params);
    return b_contour(ctx).b / a_asym(l0_star, params);
}

LeadingLaw leading_law(const Exponent& alpha, double gamma) {
    require_canonical(alpha);
    if (alpha.is_quadratic()) return {true, 2.0 * gamma, 2.0};
    if (alpha.is_linear()) return {false, gamma * gamma / (4.0 * kPi * kPi), 2.0};
    const auto c = watson_coefficients(alpha, 1, gamma).front();
    return {false, c.xi_coefficient, c.xi_power};
}

double btilde_leading(double x, const Exponent& alpha, double gamma) {
    const LeadingLaw law = leading_law(alpha, gamma);
    if (law.exponential) return x == 0.0 ? 0.0 : std::exp(-kPi * kPi / (law.coefficient * x * x));
    return law.coefficient * std::pow(x, law.exponent);
}

double btilde_series_universal(double x, const Exponent& alpha, int n_terms, double gamma) {
    if (alpha.is_linear() || alpha.is_quadratic())
        throw DomainError("btilde_series_universal: the series exists only for 1 < alpha < 2");
    if (!(x >= 0.0)) throw DomainError("btilde_series_universal: x must be non-negative");
    double sum = 0.0;
    for (const auto& c : watson_coefficients(alpha, n_terms, gamma)) sum += c.xi_coefficient * std::pow(x, c.xi_power);
    return sum;
}

double concurrence(double b_tilde) {
    if (!(b_tilde >= 0.0)) throw DomainError("concurrence: b_tilde must be non-negative");
    const double c = (1.0 - 2.0 * b_tilde) / ((1.0 + b_tilde) * (1.0 + b_tilde));
    return c > 0.0 ? c : 0.0;
}

double btilde_from_concurrence(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("btilde_from_concurrence: C must lie in [0, 1]");
    // Smaller root of C b^2 + 2 (C + 1) b + (C - 1) = 0, rationalised.
    return (1.0 - c) / ((c + 1.0) + std::sqrt(3.0 * c + 1.0));
}

double leonhard_fit(double x) {
    if (!(x >= 0.0)) throw DomainError("leonhard_fit: x must be non-negative");
    return std::exp(-4.16 * std::pow(x, 3.24));
}

double death_point(const Exponent& alpha, double gamma) {
    require_canonical(alpha);
    double lo = 1e-3, hi = 10.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (btilde_universal(mid, alpha, gamma) < 0.5 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

UniversalPoint universal_point(double x, const Exponent& alpha, double gamma) {
    UniversalPoint p;
    p.x = x;
    p.alpha = alpha;
    p.b_tilde = btilde_universal(x, alpha, gamma);
    p.concurrence = concurrence(p.b_tilde);
    return p;
}

}  // namespace oamlab

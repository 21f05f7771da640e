#include "oamlab/map_asymptotic.hpp"

#include "oamlab/errors.hpp"
#include "oamlab/quadrature.hpp"
#include "oamlab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace oamlab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_l0(int l0) {
    if (l0 < 1) throw DomainError("asymptotic amplitudes need l0 >= 1");
}

double amplitude_scale(int l0, const TurbulenceParams& params) {
    const double alpha = params.alpha.value();
    return std::pow(2.0, -alpha - 1.0) * params.gamma * std::pow(2.0 * l0, 0.5 * alpha) *
           std::pow(params.strength(), alpha);
}

}  // namespace

double default_beta(const Exponent& alpha) {
    if (alpha.is_kolmogorov()) return -kPi / 5.0;
    return -kPi / (2.0 + 2.0 * alpha.value());
}

AsymptoticContext make_context(int l0, const TurbulenceParams& params, std::optional<double> beta, int n_terms) {
    require_l0(l0);
    params.validate();
    AsymptoticContext ctx;
    ctx.l0 = l0;
    ctx.params = params;
    ctx.A = amplitude_scale(l0, params);
    ctx.beta = beta.value_or(default_beta(params.alpha));
    ctx.n_terms = n_terms;
    const double alpha = params.alpha.value();
    ctx.q = std::polar(ctx.A, alpha * ctx.beta);
    ctx.s = std::complex<double>(0.0, 2.0 * l0) * std::polar(1.0, ctx.beta);
    if (!(std::cos(alpha * ctx.beta) > 0.0) || !(ctx.s.real() > 0.0)) {
        std::ostringstream msg;
        msg << "rotation angle beta=" << ctx.beta << " violates Re q > 0, Re s > 0 for alpha="
            << params.alpha.to_string();
        throw DomainError(msg.str());
    }
    return ctx;
}

double a_asym(int l0, const TurbulenceParams& params) {
    require_l0(l0);
    const double alpha = params.alpha.value();
    const double A = amplitude_scale(l0, params);
    return std::pow(A, -1.0 / alpha) * std::exp(ln_gamma(1.0 + 1.0 / alpha)) / kPi;
}

ContourResult b_contour(const AsymptoticContext& ctx) {
    const double alpha = ctx.params.alpha.value();
    if (ctx.A == 0.0) return {};
    // x = y / |s|. Since e^{i beta} / s is purely imaginary, only
    // e^{-s x} (exp(-q x^alpha) - 1) contributes to the real part; writing it with
    // expm1 avoids the cancellation that limits the plain form at small b.
    const double scale = std::abs(ctx.s);
    const std::complex<double> unit_s = ctx.s / scale;
    const std::complex<double> qy = ctx.q * std::pow(scale, -alpha);
    const std::complex<double> rot = std::polar(1.0, ctx.beta);
    auto f = [&](double y) {
        const std::complex<double> e = -qy * std::pow(y, alpha);
        const std::complex<double> em1 = std::abs(e) < 1e-5 ? e * (1.0 + e * (0.5 + e / 6.0)) : std::exp(e) - 1.0;
        return rot * std::exp(-unit_s * y) * em1;
    };

    const double decay = unit_s.real();  // = -sin(beta) > 0
    const double y_max = 90.0 / decay;
    // Inner scale where |q x^alpha| ~ 1.
    const double y_q = std::pow(std::abs(qy), -1.0 / alpha);
    // Geometric panels resolve the inner scale and x^alpha at the origin, unit
    // panels the oscillation (period 2 pi / cos beta in y).
    std::vector<double> edges{0.0};
    for (double y = std::min(1.0, y_q) * 1e-8; y < 1.0; y *= 2.0) edges.push_back(y);
    for (double y = 1.0; y < y_max; y += 1.0) edges.push_back(y);
    edges.push_back(y_max);

    const quad::AdaptiveOptions opt{1e-13, 0.0, 100'000};
    const auto res = quad::integrate_panels<std::complex<double>>(f, edges, opt);
    if (!res.converged) {
        std::ostringstream msg;
        msg << "contour integral did not converge (alpha=" << ctx.params.alpha.to_string() << ", l0=" << ctx.l0
            << ", t=" << ctx.params.strength() << ")";
        throw ConvergenceError(msg.str(), res.error);
    }
    return {res.value.real() / (kPi * scale), res.error / (kPi * scale)};
}

double b_asym(const AsymptoticContext& ctx) {
    const auto& alpha = ctx.params.alpha;
    const double l0 = ctx.l0;
    const double t = ctx.params.strength();
    const double g = ctx.params.gamma;
    if (t == 0.0) return 0.0;
    if (alpha.is_linear()) {
        const double tt = t * t;
        return g / (4.0 * kPi) * std::sqrt(2.0 * l0) * t / (4.0 * l0 * l0 + g * g * tt * l0 / 8.0);
    }
    if (alpha.is_quadratic()) return std::exp(-4.0 * l0 / (g * t * t)) / (t * std::sqrt(kPi * g * l0));
    return b_contour(ctx).b;
}

AmplitudePair amplitudes_asymptotic(int l0, const TurbulenceParams& params, std::optional<double> beta) {
    AmplitudePair out;
    out.method = Method::asymptotic;
    if (params.strength() == 0.0) {
        // The steepest-descent forms are singular at t = 0; the physical limit is the identity.
        out.advisory = true;
        return out;
    }
    const AsymptoticContext ctx = make_context(l0, params, beta);
    out.a = a_asym(l0, params);
    const auto& alpha = params.alpha;
    if (alpha.is_linear() || alpha.is_quadratic()) {
        out.b = b_asym(ctx);
    } else {
        const ContourResult c = b_contour(ctx);
        out.b = c.b;
        out.err = c.err;
    }
    out.b_tilde = out.b / out.a;
    out.err_b_tilde = out.err / out.a;
    out.advisory = out.a > 1.0;
    return out;
}

std::vector<SeriesCoefficient> watson_coefficients(const Exponent& alpha_exp, int n_terms, double gamma) {
    if (n_terms < 1) throw DomainError("series needs at least one term");
    const double alpha = alpha_exp.value();
    const double base = std::pow(2.0, -alpha - 1.0) * gamma;
    const double ln_norm = ln_gamma(1.0 + 1.0 / alpha);
    std::vector<SeriesCoefficient> out;
    out.reserve(n_terms);
    for (int n = 1; n <= n_terms; ++n) {
        const double power = 0.5 * (n * alpha + 1.0);
        // |(-1)^n Gamma(1+n alpha)/n!| base^{n+1/alpha} 2^{-power} / Gamma(1+1/alpha)
        const double ln_env = ln_gamma(1.0 + n * alpha) - ln_gamma(n + 1.0) + (n + 1.0 / alpha) * std::log(base) -
                              power * std::numbers::ln2 - ln_norm;
        double cosine = std::cos(kPi * (n * alpha + 1.0) / 2.0);
        if (std::abs(cosine) < 1e-15) cosine = 0.0;
        SeriesCoefficient c;
        c.n = n;
        c.power = power;
        c.envelope = std::exp(ln_env);
        c.coefficient = (n % 2 == 0 ? 1.0 : -1.0) * c.envelope * cosine;
        // t^2/l0 = (8/pi^2) (xi/r0)^2 with the large-l0 correlation length.
        c.xi_power = 2.0 * power;
        c.xi_coefficient = c.coefficient * std::pow(8.0 / (kPi * kPi), power);
        out.push_back(c);
    }
    return out;
}

int series_growth_onset(int l0, const TurbulenceParams& params, int n_max) {
    require_l0(l0);
    const double u = params.strength() * params.strength() / l0;
    const auto coeffs = watson_coefficients(params.alpha, n_max, params.gamma);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& c : coeffs) {
        const double env = c.envelope * std::pow(u, c.power);
        if (c.n > 1 && env > prev) return c.n;
        prev = env;
    }
    return 0;
}

SeriesResult b_series(int l0, const TurbulenceParams& params, int n_terms) {
    require_l0(l0);
    SeriesResult out;
    const double u = params.strength() * params.strength() / l0;
    const auto coeffs = watson_coefficients(params.alpha, n_terms, params.gamma);
    for (const auto& c : coeffs) {
        const double term = u == 0.0 ? 0.0 : c.coefficient * std::pow(u, c.power);
        out.terms.push_back(term);
        out.b_tilde += term;
    }
    out.growth_onset = series_growth_onset(l0, params);
    out.diverging = out.growth_onset != 0 && out.growth_onset <= n_terms;
    return out;
}

AmplitudePair exact_quadratic(int l0, const TurbulenceParams& params) {
    require_l0(l0);
    if (!params.alpha.is_quadratic()) throw DomainError("exact_quadratic requires alpha = 2");
    const double t = params.strength();
    AmplitudePair out;
    out.method = Method::exact_quadratic;
    out.advisory = l0 > 50 || t > 2.0;
    if (t == 0.0) return out;

    const double tau = params.gamma * t * t;
    const double z = std::pow(tau / (2.0 + tau), 2);
    const double L = l0;
    const double ln2 = std::numbers::ln2;
    const double ln_2tau = std::log(2.0 + tau);

    const LogSigned fa = gauss_2f1((L + 1.0) / 2.0, (L + 2.0) / 2.0, 1.0, z);
    const LogSigned a = LogSigned::from_log((L + 1.0) * ln2 - (L + 1.0) * ln_2tau) * fa;

    const LogSigned fb = gauss_2f1((3.0 * L + 1.0) / 2.0, (3.0 * L + 2.0) / 2.0, 2.0 * L + 1.0, z);
    const LogSigned b = LogSigned::from_log((L + 1.0) * ln2 - (3.0 * L + 1.0) * ln_2tau +
                                            2.0 * L * std::log(tau / 2.0) + ln_binomial(3.0 * L, L)) *
                        fb;

    out.a = a.value();
    out.b = b.value();
    out.b_tilde = (b / a).value();
    // Series truncated at 1e-15 relative; a few ulps of log-space rounding on top.
    out.err_a = 1e-14 * std::abs(out.a) * std::max(1.0, L / 10.0);
    out.err = 1e-14 * std::abs(out.b) * std::max(1.0, L / 10.0);
    out.err_b_tilde = std::hypot(out.err / out.a, out.b_tilde * out.err_a / out.a);
    return out;
}

}  // namespace oamlab

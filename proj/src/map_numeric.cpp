#include "oamlab/map_numeric.hpp"

#include "oamlab/errors.hpp"
#include "oamlab/quadrature.hpp"
#include "oamlab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace oamlab {

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
    if (!(abs_tol >= 0.0)) throw DomainError("abs_tol must be non-negative");
    if (!(rho_window >= 3.0)) throw DomainError("rho_window must be at least 3");
    if (theta_points_per_period < 8) throw DomainError("theta_points_per_period must be at least 8");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be positive");
}

namespace {

constexpr double kPi = std::numbers::pi;

// Radial integral of exp(h(rho)) with
//   h(rho) = n ln rho - 2 rho^2 - d rho^alpha,  n = 2 l0 + 1.
// Everything is measured from the d = 0 peak rho0 = sqrt(n/4): the absolute
// values of h run into the thousands at large l0 and their rounding would
// otherwise show up as noise in the angular integrand.
class RadialIntegral {
public:
    RadialIntegral(int l0, double alpha, double window)
        : n_(2.0 * l0 + 1.0),
          alpha_(alpha),
          window_(window),
          u0_(0.5 * std::log(n_ / 4.0)),
          rule_(quad::gauss_legendre(kOrder)) {}

    /// h(rho0) at d = 0.
    double reference() const { return n_ * u0_ - 0.5 * n_; }

    struct Result {
        double log_value;  ///< ln of the integral minus reference()
        double tail;       ///< relative mass outside the window
    };

    Result operator()(double d) const {
        const double dr = d * std::exp(alpha_ * u0_);  // d rho0^alpha
        // Peak offset v = ln(rho*/rho0): Newton on rho h'(rho) / n. The function is
        // decreasing and concave with a non-positive value at v = 0, so the
        // iteration approaches the root monotonically from the right.
        double v = 0.0;
        for (int iter = 0; iter < 100 && dr > 0.0; ++iter) {
            const double ea = dr * alpha_ * std::exp(alpha_ * v);
            const double psi = -n_ * std::expm1(2.0 * v) - ea;
            const double dpsi = -2.0 * n_ * std::exp(2.0 * v) - alpha_ * ea;
            const double step = psi / dpsi;
            v -= step;
            if (std::abs(step) < 1e-16) break;
        }
        const double h_peak = offset(v, 0.0, dr) - dr;  // h(rho*) at d minus h(rho0) at d = 0
        const double rho0 = std::exp(u0_);
        const double peak = rho0 * std::exp(v);
        const double curvature = n_ / (peak * peak) + 4.0 + d * alpha_ * (alpha_ - 1.0) * std::pow(peak, alpha_ - 2.0);
        const double sigma = 1.0 / std::sqrt(curvature);

        // Window edges where h has dropped by window^2/2; h is concave in ln rho.
        const double drop = 0.5 * window_ * window_;
        const double v_hi = edge(v, std::log1p(window_ * sigma / peak), dr, drop);
        const double v_lo = window_ * sigma >= peak ? -kInf : edge(v, std::log1p(-window_ * sigma / peak), dr, drop);
        const double hi = peak * std::exp(v_hi);
        const double lo = peak * std::exp(v_lo);
        const double width = (hi - lo) / kPanels;
        double sum = 0.0;
        for (int p = 0; p < kPanels; ++p) {
            const double mid = lo + (p + 0.5) * width;
            double acc = 0.0;
            for (int i = 0; i < kOrder; ++i) {
                const double rho = mid + 0.5 * width * rule_.nodes[i];
                acc += rule_.weights[i] * std::exp(offset(v + std::log(rho / peak), v, dr));
            }
            sum += 0.5 * width * acc;
        }

        // Discarded mass: the upper tail is bounded by e^{h}/|h'| (h concave beyond the
        // peak), the lower by lo e^{h(lo)} (integrand increasing below the peak).
        double tail = std::exp(offset(v + v_hi, v, dr)) /
                      std::abs(n_ / hi - 4.0 * hi - d * alpha_ * std::pow(hi, alpha_ - 1.0));
        if (lo > 0.0) tail += lo * std::exp(offset(v + v_lo, v, dr));
        return {h_peak + std::log(sum), tail / sum};
    }

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();
    // Fixed panel count and smooth window edges keep the result a smooth function
    // of d; the adaptive angular integration needs that.
    static constexpr int kOrder = 12;
    static constexpr int kPanels = 12;

    // h(rho0 e^w) - h(rho0 e^base) written without large cancelling terms.
    double offset(double w, double base, double dr) const {
        const double dw = w - base;
        double out = n_ * dw - 0.5 * n_ * std::exp(2.0 * base) * std::expm1(2.0 * dw);
        if (dr > 0.0) out -= dr * std::exp(alpha_ * base) * std::expm1(alpha_ * dw);
        return out;
    }

    // Offset s from the peak v (in ln rho) where h has dropped by `drop`, on the
    // side of s_start.
    double edge(double v, double s_start, double dr, double drop) const {
        double s = s_start;
        for (int iter = 0; iter < 200; ++iter) {
            const double g = offset(v + s, v, dr) + drop;
            const double dg = n_ - n_ * std::exp(2.0 * (v + s)) - (dr > 0.0 ? alpha_ * dr * std::exp(alpha_ * (v + s)) : 0.0);
            if (dg == 0.0) break;
            double next = s - g / dg;
            // Stay on the requested side of the peak.
            if (next * s_start <= 0.0) next = 0.5 * s;
            const double step = next - s;
            s = next;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(s))) break;
        }
        return s;
    }

    double n_;
    double alpha_;
    double window_;
    double u0_;
    const quad::GaussRule& rule_;
};

// Panel edges on [0, span]: uniform width h with the first panel graded
// geometrically toward 0, where sin^alpha(theta/2) is not smooth.
std::vector<double> theta_edges(double span, double h) {
    std::vector<double> edges{0.0};
    for (int k = 20; k >= 1; --k) edges.push_back(h * std::pow(0.25, k));
    for (double x = h; x < span; x += h) edges.push_back(x);
    edges.push_back(span);
    // Drop a sliver left by floating-point accumulation before the end point.
    if (edges.size() > 2 && edges[edges.size() - 1] - edges[edges.size() - 2] < 1e-3 * h)
        edges.erase(edges.end() - 2);
    return edges;
}

}  // namespace

MapElement lambda_diag(int l1, int l0, const TurbulenceParams& params, const QuadratureConfig& cfg) {
    cfg.validate();
    if (l0 < 1) throw DomainError("lambda_diag: l0 must be positive");
    const double alpha = params.alpha.value();
    const double t = params.strength();
    const int m = l1 - l0;
    const double d0 = std::pow(2.0, alpha - 1.0) * params.gamma * std::pow(t, alpha);

    MapElement out;
    if (d0 == 0.0) {
        // No turbulence: the map is the identity.
        out.value = m == 0 ? 1.0 : 0.0;
        out.noise_floor = m != 0;
        return out;
    }

    const RadialIntegral radial(l0, alpha, cfg.rho_window);
    const double log_prefactor =
        (l0 + 1.0) * std::numbers::ln2 - std::log(kPi) - ln_gamma(l0 + 1.0) + radial.reference();
    double worst_tail = 0.0;
    auto envelope = [&](double theta) {
        const double s = std::sin(0.5 * theta);
        const double d = s > 0.0 ? d0 * std::pow(s, alpha) : 0.0;
        const auto r = radial(d);
        worst_tail = std::max(worst_tail, r.tail);
        return std::exp(log_prefactor + r.log_value);
    };

    const double freq = std::max(std::abs(m), 2);
    const double panel = 2.0 * kPi / (cfg.theta_points_per_period * freq);
    const quad::AdaptiveOptions opt{cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions};

    double magnitude_integral = 0.0;
    bool converged = false;
    if (cfg.full_period) {
        const auto edges = theta_edges(2.0 * kPi, panel);
        auto f = [&](double theta) { return std::polar(envelope(theta), m * theta); };
        const auto res = quad::integrate_panels<std::complex<double>>(f, edges, opt);
        out.value = res.value.real();
        out.imag = res.value.imag();
        out.err = res.error;
        out.evaluations = res.evaluations;
        magnitude_integral = res.roundoff / (50.0 * std::numeric_limits<double>::epsilon());
        converged = res.converged;
    } else {
        // d(theta) is symmetric about theta = pi, so the sine part cancels.
        const auto edges = theta_edges(kPi, panel);
        auto f = [&](double theta) { return 2.0 * std::cos(m * theta) * envelope(theta); };
        const auto res = quad::integrate_panels<double>(f, edges, opt);
        out.value = res.value;
        out.err = res.error;
        out.evaluations = res.evaluations;
        magnitude_integral = res.roundoff / (50.0 * std::numeric_limits<double>::epsilon());
        converged = res.converged;
    }
    out.err += worst_tail * magnitude_integral;
    if (!converged) {
        std::ostringstream msg;
        msg << "lambda_diag did not converge (alpha=" << params.alpha.to_string() << ", l0=" << l0
            << ", l1=" << l1 << ", t=" << t << "): error " << out.err;
        throw ConvergenceError(msg.str(), out.err);
    }
    out.noise_floor = std::abs(out.value) < std::max(10.0 * out.err, cfg.abs_tol);
    return out;
}

AmplitudePair amplitudes_numeric(int l0, const TurbulenceParams& params, const QuadratureConfig& cfg) {
    const MapElement a = lambda_diag(l0, l0, params, cfg);
    const MapElement b = lambda_diag(-l0, l0, params, cfg);
    AmplitudePair out;
    out.method = Method::quadrature;
    out.a = a.value;
    // Below the noise floor the sign of b is meaningless; report the upper bound instead.
    out.b = b.noise_floor ? std::abs(b.value) + b.err : b.value;
    out.b_tilde = out.b / a.value;
    out.err_a = a.err;
    out.err = b.err;
    out.err_b_tilde = std::hypot(b.err / a.value, out.b_tilde * a.err / a.value);
    out.noise_floor = b.noise_floor;
    return out;
}

}  // namespace oamlab

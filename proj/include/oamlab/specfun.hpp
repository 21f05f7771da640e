#pragma once

#include <cmath>
#include <limits>

namespace oamlab {

/// A real number stored as (log|v|, sign). Products and quotients of
/// factorial-sized quantities stay representable long after `double` would
/// overflow.
struct LogSigned {
    double log_magnitude = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static LogSigned zero() { return {}; }
    static LogSigned one() { return {0.0, 1}; }
    static LogSigned from_log(double log_magnitude, int sign = 1) {
        return sign == 0 ? zero() : LogSigned{log_magnitude, sign > 0 ? 1 : -1};
    }
    static LogSigned from_value(double v);

    bool is_zero() const { return sign == 0; }

    /// Exponentiates back to a double; overflows to +-inf and underflows to 0.
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
};

LogSigned operator*(const LogSigned& x, const LogSigned& y);
LogSigned operator/(const LogSigned& x, const LogSigned& y);

/// Natural log of the gamma function for x > 0. Throws DomainError otherwise.
double ln_gamma(double x);

/// ln of the binomial coefficient (n choose k) for 0 <= k <= n.
double ln_binomial(double n, double k);

/// Gauss hypergeometric series 2F1(beta, delta; eta; z) for z in [0, 1).
///
/// Terms are accumulated relative to the running largest term, with
/// compensated summation, so parameters in the hundreds (where the terms
/// grow for thousands of indices before decaying) stay finite. Summation
/// stops once the tail bound falls below 1e-15 of the partial sum.
///
/// Throws DomainError when eta is a non-positive integer or z is outside
/// [0, 1), and ConvergenceError when `max_terms` is reached.
LogSigned gauss_2f1(double beta, double delta, double eta, double z, long max_terms = 1'000'000);

}  // namespace oamlab

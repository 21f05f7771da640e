#include "oamlab/specfun.hpp"

#include "oamlab/errors.hpp"

#include <math.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oamlab {

LogSigned LogSigned::from_value(double v) {
    if (v == 0.0) return zero();
    return {std::log(std::abs(v)), v > 0 ? 1 : -1};
}

LogSigned operator*(const LogSigned& x, const LogSigned& y) {
    if (x.is_zero() || y.is_zero()) return LogSigned::zero();
    return {x.log_magnitude + y.log_magnitude, x.sign * y.sign};
}

LogSigned operator/(const LogSigned& x, const LogSigned& y) {
    if (y.is_zero()) throw DomainError("LogSigned division by zero");
    if (x.is_zero()) return LogSigned::zero();
    return {x.log_magnitude - y.log_magnitude, x.sign * y.sign};
}

double ln_gamma(double x) {
    if (!(x > 0.0)) {
        std::ostringstream msg;
        msg << "ln_gamma: argument must be positive, got " << x;
        throw DomainError(msg.str());
    }
#if defined(__GLIBC__)
    // Reentrant variant: std::lgamma writes the global signgam.
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double ln_binomial(double n, double k) {
    if (k < 0.0 || k > n) throw DomainError("ln_binomial: need 0 <= k <= n");
    return ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
}

namespace {

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

// Neumaier summation of terms expressed relative to a movable scale exp(scale).
class ScaledSum {
public:
    void add(double log_magnitude, int sign) {
        if (log_magnitude > scale_) {
            const double shrink = std::exp(scale_ - log_magnitude);
            sum_ *= shrink;
            comp_ *= shrink;
            scale_ = log_magnitude;
        }
        const double term = sign * std::exp(log_magnitude - scale_);
        const double t = sum_ + term;
        if (std::abs(sum_) >= std::abs(term))
            comp_ += (sum_ - t) + term;
        else
            comp_ += (term - t) + sum_;
        sum_ = t;
    }

    double scaled_total() const { return sum_ + comp_; }
    double scale() const { return scale_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double scale_ = 0.0;
};

}  // namespace

LogSigned gauss_2f1(double beta, double delta, double eta, double z, long max_terms) {
    if (std::isnan(beta) || std::isnan(delta) || std::isnan(eta) || std::isnan(z))
        throw DomainError("gauss_2f1: NaN argument");
    if (is_nonpositive_integer(eta)) {
        std::ostringstream msg;
        msg << "gauss_2f1: eta must not be a non-positive integer, got " << eta;
        throw DomainError(msg.str());
    }
    if (z < 0.0 || z >= 1.0) {
        std::ostringstream msg;
        msg << "gauss_2f1: z must lie in [0, 1), got " << z;
        throw DomainError(msg.str());
    }
    if (z == 0.0) return LogSigned::one();

    const double log_z = std::log(z);
    // Beyond this index every ratio has a fixed sign and tends to z.
    const double stable_from = std::max({0.0, -beta, -delta, -eta}) + 1.0;

    ScaledSum sum;
    double log_term = 0.0;
    int sign = 1;
    sum.add(log_term, sign);

    for (long k = 0; k < max_terms; ++k) {
        const double kk = static_cast<double>(k);
        const double num = (beta + kk) * (delta + kk);
        if (num == 0.0) break;  // terminating (polynomial) series
        const double den = (eta + kk) * (kk + 1.0);
        const double ratio = num / den * z;

        log_term += std::log(std::abs(num)) - std::log(std::abs(den)) + log_z;
        if (ratio < 0.0) sign = -sign;
        sum.add(log_term, sign);

        if (kk >= stable_from && std::abs(ratio) < 1.0) {
            const double bound_ratio = std::max(std::abs(ratio), z);
            const double log_tail = log_term + std::log(bound_ratio) - std::log1p(-bound_ratio);
            const double total = std::abs(sum.scaled_total());
            if (total > 0.0 && std::exp(log_tail - sum.scale()) < 1e-15 * total) {
                const double s = sum.scaled_total();
                return LogSigned::from_log(std::log(std::abs(s)) + sum.scale(), s > 0 ? 1 : -1);
            }
        }
        if (k + 1 == max_terms) {
            const double total = std::abs(sum.scaled_total());
            const double residual = total > 0.0 ? std::exp(log_term - sum.scale()) / total
                                                 : std::numeric_limits<double>::infinity();
            std::ostringstream msg;
            msg << "gauss_2f1(" << beta << ", " << delta << "; " << eta << "; z=" << z
                << ") did not converge within " << max_terms << " terms (last relative term "
                << residual << ")";
            throw ConvergenceError(msg.str(), residual);
        }
    }

    const double s = sum.scaled_total();
    if (s == 0.0) return LogSigned::zero();
    return LogSigned::from_log(std::log(std::abs(s)) + sum.scale(), s > 0 ? 1 : -1);
}

}  // namespace oamlab

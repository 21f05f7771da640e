#include "oamlab/turbulence.hpp"

#include "oamlab/errors.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace oamlab {

namespace {

void check_range(double v) {
    if (!(v >= 1.0 && v <= 2.0)) {
        std::ostringstream msg;
        msg << "alpha must lie in [1, 2], got " << v;
        throw DomainError(msg.str());
    }
}

long parse_long(std::string_view s) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw DomainError("malformed exponent: " + std::string(s));
    return v;
}

}  // namespace

Exponent::Exponent(double value) : value_(value), num_(0), den_(0) {
    check_range(value);
    // Decimals close to a small fraction are taken as that fraction.
    for (long d = 1; d <= 12; ++d) {
        const double n = std::round(value * d);
        if (std::abs(n / d - value) < 1e-4) {
            const long g = std::gcd(static_cast<long>(n), d);
            num_ = static_cast<long>(n) / g;
            den_ = d / g;
            value_ = static_cast<double>(num_) / den_;
            return;
        }
    }
}

Exponent::Exponent(long numerator, long denominator) {
    if (denominator <= 0 || numerator <= 0) throw DomainError("exponent fraction needs positive parts");
    const long g = std::gcd(numerator, denominator);
    num_ = numerator / g;
    den_ = denominator / g;
    value_ = static_cast<double>(num_) / den_;
    check_range(value_);
}

Exponent Exponent::parse(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw DomainError("empty exponent");
    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return Exponent(parse_long(text.substr(0, slash)), parse_long(text.substr(slash + 1)));
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw DomainError("malformed exponent: " + std::string(text));
    return Exponent(v);
}

std::string Exponent::to_string() const {
    if (is_rational()) {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    std::ostringstream out;
    out.precision(17);
    out << value_;
    return out.str();
}

TurbulenceParams TurbulenceParams::from_strength(Exponent alpha, double t, double w0) {
    if (!(t >= 0.0)) throw DomainError("turbulence strength must be non-negative");
    if (!(w0 > 0.0)) throw DomainError("w0 must be positive");
    TurbulenceParams p;
    p.alpha = alpha;
    p.w0 = w0;
    p.r0 = t == 0.0 ? std::numeric_limits<double>::infinity() : w0 / t;
    return p;
}

TurbulenceParams TurbulenceParams::from_path(Exponent alpha, const PathInputs& path, double w0) {
    TurbulenceParams p;
    p.alpha = alpha;
    p.w0 = w0;
    p.path = path;
    p.r0 = fried_parameter(path.cn2, path.k, path.length);
    p.validate();
    return p;
}

void TurbulenceParams::validate() const {
    check_range(alpha.value());
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    if (!(r0 > 0.0)) throw DomainError("r0 must be positive");
    if (!(w0 > 0.0)) throw DomainError("w0 must be positive");
}

double structure_function(double x, const TurbulenceParams& params) {
    if (!(x >= 0.0)) throw DomainError("separation must be non-negative");
    return params.gamma * std::pow(x / params.r0, params.alpha.value());
}

double fried_parameter(double cn2, double k, double length) {
    if (!(cn2 > 0.0 && k > 0.0 && length > 0.0))
        throw DomainError("fried_parameter: Cn2, k and L must be positive");
    return std::pow(0.423 * cn2 * k * k * length, -3.0 / 5.0);
}

}  // namespace oamlab

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace oamlab {

inline constexpr double kGamma = 6.88;

/// Structure-function exponent. Fractions such as "5/3" keep their numerator
/// and denominator so canonical cases are recognised exactly.
class Exponent {
public:
    Exponent() = default;
    explicit Exponent(double value);
    Exponent(long numerator, long denominator);

    /// Accepts "5/3", "1", "1.6667" and similar. Throws DomainError outside [1, 2].
    static Exponent parse(std::string_view text);

    double value() const { return value_; }
    long numerator() const { return num_; }
    long denominator() const { return den_; }
    bool is_rational() const { return den_ > 0; }

    bool is_linear() const { return is_rational() && num_ == den_; }
    bool is_kolmogorov() const { return is_rational() && num_ * 3 == den_ * 5; }
    bool is_quadratic() const { return is_rational() && num_ == 2 * den_; }

    std::string to_string() const;

private:
    double value_ = 5.0 / 3.0;
    long num_ = 5;
    long den_ = 3;  // 0 when the value is not a known rational
};

struct PathInputs {
    double cn2 = 0.0;  ///< index structure constant, length^(-2/3)
    double k = 0.0;    ///< optical wavenumber
    double length = 0.0;
};

struct TurbulenceParams {
    Exponent alpha{};
    double gamma = kGamma;
    double r0 = 1.0;
    double w0 = 1.0;
    std::optional<PathInputs> path;

    /// Turbulence strength t = w0 / r0.
    double strength() const { return w0 / r0; }

    /// Parameters at strength t with w0 = 1. t = 0 maps to r0 = infinity.
    static TurbulenceParams from_strength(Exponent alpha, double t, double w0 = 1.0);
    static TurbulenceParams from_path(Exponent alpha, const PathInputs& path, double w0 = 1.0);

    void validate() const;
};

/// D(x) = gamma (x / r0)^alpha.
double structure_function(double x, const TurbulenceParams& params);

/// r0 = (0.423 Cn2 k^2 L)^(-3/5). Throws DomainError on non-positive inputs.
double fried_parameter(double cn2, double k, double length);

}  // namespace oamlab

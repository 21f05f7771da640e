#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace oamlab {

enum class Method { quadrature, asymptotic, series, exact_quadratic, montecarlo };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view text);

/// Survival amplitude a, crosstalk amplitude b and their ratio b_tilde.
struct AmplitudePair {
    double a = 1.0;
    double b = 0.0;
    double b_tilde = 0.0;
    Method method = Method::quadrature;
    double err = 0.0;          ///< absolute error estimate on b (standard error for montecarlo)
    double err_a = 0.0;        ///< absolute error estimate on a
    double err_b_tilde = 0.0;  ///< propagated error on b_tilde
    bool noise_floor = false;  ///< b is below its own error; treat b and b_tilde as upper bounds
    bool advisory = false;     ///< asymptotic formula used outside its range (e.g. a > 1)
};

}  // namespace oamlab

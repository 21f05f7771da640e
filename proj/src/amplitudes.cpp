#include "oamlab/amplitudes.hpp"

#include <array>
#include <utility>

namespace oamlab {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 5> kNames{{
    {Method::quadrature, "quadrature"},
    {Method::asymptotic, "asymptotic"},
    {Method::series, "series"},
    {Method::exact_quadratic, "exact_quadratic"},
    {Method::montecarlo, "montecarlo"},
}};

}  // namespace

std::string_view to_string(Method m) {
    for (const auto& [method, name] : kNames)
        if (method == m) return name;
    return "unknown";
}

std::optional<Method> parse_method(std::string_view text) {
    for (const auto& [method, name] : kNames)
        if (name == text) return method;
    return std::nullopt;
}

}  // namespace oamlab

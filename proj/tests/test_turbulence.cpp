#include "doctest.h"

#include "oamlab/errors.hpp"
#include "oamlab/turbulence.hpp"

#include <cmath>
#include <numbers>

using namespace oamlab;
using doctest::Approx;

TEST_CASE("Exponent parsing") {
    const Exponent k = Exponent::parse("5/3");
    CHECK(k.is_kolmogorov());
    CHECK(k.value() == Approx(5.0 / 3.0).epsilon(1e-16));
    CHECK(k.to_string() == "5/3");
    CHECK(Exponent::parse("1").is_linear());
    CHECK(Exponent::parse("2").is_quadratic());
    CHECK(Exponent::parse("2.0").is_quadratic());
    CHECK(Exponent::parse("10/6").is_kolmogorov());
    CHECK(Exponent::parse("1.5").value() == 1.5);
    CHECK_FALSE(Exponent::parse("1.2345").is_kolmogorov());
    CHECK_THROWS_AS(Exponent::parse("3"), DomainError);
    CHECK_THROWS_AS(Exponent::parse("0.5"), DomainError);
    CHECK_THROWS_AS(Exponent::parse("abc"), DomainError);
    CHECK_THROWS_AS(Exponent::parse("5/0"), DomainError);
}

TEST_CASE("structure function values") {
    for (auto alpha : {Exponent(1, 1), Exponent(5, 3), Exponent(2, 1)}) {
        TurbulenceParams p;
        p.alpha = alpha;
        p.r0 = 0.7;
        CHECK(structure_function(0.0, p) == 0.0);
        CHECK(structure_function(0.7, p) == Approx(6.88).epsilon(1e-15));
    }
    TurbulenceParams q;
    q.alpha = Exponent(2, 1);
    CHECK(structure_function(2.0, q) == Approx(27.52).epsilon(1e-15));
}

TEST_CASE("structure function homogeneity") {
    TurbulenceParams p;
    p.alpha = Exponent(5, 3);
    p.r0 = 1.3;
    for (double lambda : {0.25, 2.0, 7.5}) {
        TurbulenceParams scaled = p;
        scaled.r0 = p.r0 / lambda;
        const double lhs = structure_function(lambda * 0.4, p);
        const double rhs = structure_function(0.4, scaled);
        CHECK(std::abs(lhs - rhs) / rhs < 1e-15);
    }
}

TEST_CASE("linear and quadratic laws cross at r0") {
    TurbulenceParams one, two;
    one.alpha = Exponent(1, 1);
    two.alpha = Exponent(2, 1);
    for (double x : {0.1, 0.5, 0.9}) CHECK(structure_function(x, one) > structure_function(x, two));
    for (double x : {1.1, 2.0, 5.0}) CHECK(structure_function(x, one) < structure_function(x, two));
    CHECK(structure_function(1.0, one) == structure_function(1.0, two));
}

TEST_CASE("Fried parameter") {
    const double k = 2.0 * std::numbers::pi / 800e-9;
    const double r0 = fried_parameter(1e-14, k, 1000.0);
    CHECK(r0 == Approx(std::pow(0.423 * 1e-14 * k * k * 1000.0, -0.6)).epsilon(1e-14));
    CHECK(r0 == Approx(0.0355).epsilon(0.01));
    CHECK(fried_parameter(1e-14, k, 2000.0) / r0 == Approx(std::pow(2.0, -0.6)).epsilon(1e-14));
    CHECK(fried_parameter(1e-30, k, 1000.0) > 1e8);
    CHECK_THROWS_AS(fried_parameter(0.0, k, 1000.0), DomainError);
}

TEST_CASE("parameters from strength and path") {
    const auto p = TurbulenceParams::from_strength(Exponent(5, 3), 0.5, 2.0);
    CHECK(p.strength() == Approx(0.5));
    CHECK(p.r0 == Approx(4.0));
    const auto zero = TurbulenceParams::from_strength(Exponent(5, 3), 0.0);
    CHECK(std::isinf(zero.r0));
    CHECK(zero.strength() == 0.0);
    CHECK_THROWS_AS(TurbulenceParams::from_strength(Exponent(5, 3), -1.0), DomainError);

    const PathInputs path{1e-14, 2.0 * std::numbers::pi / 800e-9, 1000.0};
    const auto q = TurbulenceParams::from_path(Exponent(5, 3), path, 0.02);
    CHECK(q.r0 == Approx(fried_parameter(path.cn2, path.k, path.length)));
    CHECK(q.path.has_value());

    TurbulenceParams bad;
    bad.w0 = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

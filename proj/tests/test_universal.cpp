#include "doctest.h"

#include "oamlab/errors.hpp"
#include "oamlab/universal.hpp"

#include <cmath>
#include <numbers>

using namespace oamlab;
using doctest::Approx;

namespace {

const Exponent kOne(1, 1), kKol(5, 3), kTwo(2, 1);

double rel(double x, double y) { return std::abs(x / y - 1.0); }

}  // namespace

TEST_CASE("limits") {
    for (const auto& a : {kOne, kKol, kTwo}) {
        CHECK(btilde_universal(0.0, a) == 0.0);
        CHECK(btilde_universal(10.0, a) >= 0.99);
        CHECK(btilde_universal(100.0, a) > btilde_universal(10.0, a));
        CHECK(btilde_universal(100.0, a) <= 1.0);
    }
    CHECK_THROWS_AS(btilde_universal(-0.1, kOne), DomainError);
    CHECK_THROWS_AS(btilde_universal(0.5, Exponent(3, 2)), DomainError);
}

TEST_CASE("linear law death point") {
    const double x = 2.0 * std::numbers::pi / kGamma;
    CHECK(btilde_universal(x, kOne) == Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(death_point(kOne) - x) < 1e-10);
    CHECK(concurrence(btilde_universal(death_point(kOne), kOne)) < 1e-9);
}

TEST_CASE("Kolmogorov universal curve against mpmath") {
    // mpmath quadosc at l0 = 1e4
    CHECK(rel(btilde_universal(0.05, kKol), 9.9246096296801078e-5) < 1e-9);
    CHECK(rel(btilde_universal(0.3, kKol), 0.017748011076929896) < 1e-9);
    CHECK(rel(btilde_universal(1.0, kKol), 0.51447789975597244) < 1e-9);
}

TEST_CASE("representative l0 independence") {
    for (double x = 0.01; x <= 2.0; x *= 1.5)
        CHECK(rel(btilde_universal(x, kKol, kGamma, 10'000), btilde_universal(x, kKol, kGamma, 40'000)) < 2e-3);
}

TEST_CASE("leading-order laws") {
    const auto one = leading_law(kOne);
    CHECK_FALSE(one.exponential);
    CHECK(one.coefficient == Approx(kGamma * kGamma / (4.0 * std::numbers::pi * std::numbers::pi)).epsilon(1e-15));
    CHECK(std::abs(one.coefficient - 1.20) <= 0.005);
    CHECK(one.exponent == 2.0);
    const auto kol = leading_law(kKol);
    CHECK(std::abs(kol.coefficient - 0.29) <= 0.005);
    CHECK(kol.exponent == Approx(8.0 / 3.0).epsilon(1e-15));
    const auto two = leading_law(kTwo);
    CHECK(two.exponential);
    CHECK(two.coefficient == 2.0 * kGamma);
    CHECK(two.coefficient == 13.76);
    for (double x : {0.01, 0.02, 0.05}) {
        CHECK(rel(btilde_leading(x, kOne), btilde_universal(x, kOne)) < 0.05);
        CHECK(rel(btilde_leading(x, kKol), btilde_universal(x, kKol)) < 0.05);
    }
    CHECK(btilde_leading(0.3, kTwo) == Approx(std::exp(-std::numbers::pi * std::numbers::pi / (13.76 * 0.09))));
}

TEST_CASE("universal series") {
    const double x = 0.02;
    CHECK(rel(btilde_series_universal(x, kKol, 3), btilde_universal(x, kKol)) < 1e-6);
    CHECK(btilde_series_universal(x, kKol, 1) == Approx(btilde_leading(x, kKol)).epsilon(1e-14));
    CHECK_THROWS_AS(btilde_series_universal(x, kOne, 3), DomainError);
}

TEST_CASE("ordering") {
    for (int i = 1; i <= 100; ++i) {
        const double x = i / 100.0;
        const double b1 = btilde_universal(x, kOne), b53 = btilde_universal(x, kKol), b2 = btilde_universal(x, kTwo);
        CHECK(b1 >= b53);
        CHECK(b53 >= b2);
        CHECK(concurrence(b2) >= concurrence(b53));
        CHECK(concurrence(b53) >= concurrence(b1));
    }
}

TEST_CASE("quadratic law suppression near the origin") {
    // exp(-pi^2 / (2 gamma x^2)) stays below 1e-5 up to x = 0.2496
    for (double x = 0.01; x <= 0.2495; x += 0.01) CHECK(btilde_universal(x, kTwo) < 1e-5);
    CHECK(btilde_universal(0.3, kTwo) == Approx(3.458028e-4).epsilon(1e-6));
}

TEST_CASE("concurrence") {
    CHECK(concurrence(0.0) == 1.0);
    CHECK(concurrence(0.5) == 0.0);
    CHECK(concurrence(0.7) == 0.0);
    CHECK(concurrence(0.2) == Approx(0.6 / 1.44).epsilon(1e-15));
    CHECK_THROWS_AS(concurrence(-0.1), DomainError);
    for (double b : {0.0, 0.1, 0.25, 0.4, 0.5}) CHECK(btilde_from_concurrence(concurrence(b)) == Approx(b).epsilon(1e-13));
    CHECK(btilde_from_concurrence(0.0) == Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(btilde_from_concurrence(1.5), DomainError);
}

TEST_CASE("reference fit") {
    CHECK(leonhard_fit(0.0) == 1.0);
    CHECK(leonhard_fit(1.0) == Approx(std::exp(-4.16)).epsilon(1e-15));
    CHECK(leonhard_fit(1.0) == Approx(0.01562).epsilon(1e-3));
    double worst = 0.0;
    for (int i = 0; i <= 800; ++i) {
        const double x = i / 1000.0;
        worst = std::max(worst, std::abs(concurrence(btilde_universal(x, kKol)) - leonhard_fit(x)));
    }
    CHECK(worst <= 0.02);
    // inverting the fit saturates at b_tilde = 1/2
    CHECK(btilde_from_concurrence(leonhard_fit(5.0)) == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("universal points") {
    const auto p = universal_point(0.4, kKol);
    CHECK(p.x == 0.4);
    CHECK(p.b_tilde == btilde_universal(0.4, kKol));
    CHECK(p.concurrence == concurrence(p.b_tilde));
    CHECK(death_point(kKol) == Approx(0.977957).epsilon(1e-6));
    CHECK(btilde_universal(death_point(kTwo), kTwo) == Approx(0.5).epsilon(1e-9));
}

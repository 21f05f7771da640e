#include "doctest.h"

#include "riemann_oracle.hpp"

#include "oamlab/errors.hpp"
#include "oamlab/map_asymptotic.hpp"
#include "oamlab/map_numeric.hpp"

#include <cmath>

using namespace oamlab;
using doctest::Approx;

namespace {

TurbulenceParams at(Exponent alpha, double t) { return TurbulenceParams::from_strength(alpha, t); }

}  // namespace

TEST_CASE("no turbulence") {
    for (auto alpha : {Exponent(1, 1), Exponent(5, 3), Exponent(2, 1)}) {
        const auto p = at(alpha, 0.0);
        CHECK(lambda_diag(3, 3, p).value == 1.0);
        CHECK(lambda_diag(-3, 3, p).value == 0.0);
        const auto pair = amplitudes_numeric(3, p);
        CHECK(pair.a == 1.0);
        CHECK(pair.b_tilde == 0.0);
    }
}

TEST_CASE("quadratic law against the hypergeometric closed form") {
    const auto pair = amplitudes_numeric(1, at(Exponent(2, 1), 0.5));
    // mpmath hyp2f1 and an independent mpmath double integral agree on these
    CHECK(pair.a == Approx(0.41462891780108394).epsilon(1e-12));
    CHECK(pair.b == Approx(0.069061972373965699).epsilon(1e-12));
    CHECK(pair.b_tilde == Approx(0.16656332785524096).epsilon(1e-12));
}

TEST_CASE("mpmath double-integral oracles") {
    struct Case {
        Exponent alpha;
        int l0;
        double t, a, b;
    };
    const Case cases[] = {
        {Exponent(5, 3), 1, 0.5, 0.3668213938290368, 0.07451756208035959},
        {Exponent(5, 3), 2, 0.5, 0.2777774713579497, 0.02035557106975127},
        {Exponent(5, 3), 3, 1.0, 0.1078880494241781, 0.02667183532569981},
        {Exponent(1, 1), 1, 0.5, 0.2435191668017232, 0.07075059835341822},
        {Exponent(1, 1), 2, 1.0, 0.08968419683733608, 0.03780629461603777},
        {Exponent(2, 1), 2, 0.5, 0.3138401284447088, 0.01300531606849899},
    };
    for (const auto& c : cases) {
        CAPTURE(c.alpha.to_string());
        CAPTURE(c.l0);
        CAPTURE(c.t);
        const auto pair = amplitudes_numeric(c.l0, at(c.alpha, c.t));
        CHECK(pair.a == Approx(c.a).epsilon(1e-12));
        CHECK(pair.b == Approx(c.b).epsilon(1e-12));
        CHECK_FALSE(pair.noise_floor);
    }
}

TEST_CASE("brute-force Riemann sum at small l0") {
    for (auto alpha : {Exponent(1, 1), Exponent(5, 3)}) {
        for (int l0 : {1, 4}) {
            const double t = 0.7;
            CAPTURE(alpha.to_string());
            CAPTURE(l0);
            const auto p = at(alpha, t);
            for (int l1 : {l0, -l0}) {
                const double exact = testing::riemann_lambda(l1, l0, alpha.value(), t);
                CHECK(std::abs(lambda_diag(l1, l0, p).value / exact - 1.0) < 1e-6);
            }
        }
    }
}

TEST_CASE("published point values") {
    const auto one = amplitudes_numeric(150, at(Exponent(1, 1), 0.1));
    CHECK(one.b_tilde > 0.7e-4);
    CHECK(one.b_tilde < 1.4e-4);
    const auto kol = amplitudes_numeric(150, at(Exponent(5, 3), 0.1));
    CHECK(kol.b_tilde > 0.7e-6);
    CHECK(kol.b_tilde < 1.4e-6);
    const auto quad = amplitudes_numeric(150, at(Exponent(2, 1), 2.0));
    CHECK(quad.b_tilde == Approx(1.3e-9).epsilon(0.15));
    // mpmath hyp2f1
    CHECK(quad.b_tilde == Approx(1.259663549335592e-9).epsilon(1e-6));
}

TEST_CASE("imaginary part vanishes over the full period") {
    QuadratureConfig cfg;
    cfg.full_period = true;
    for (auto alpha : {Exponent(1, 1), Exponent(5, 3), Exponent(2, 1)}) {
        for (int l0 : {1, 7}) {
            for (int l1 : {l0, -l0}) {
                const auto e = lambda_diag(l1, l0, at(alpha, 1.0), cfg);
                CHECK(std::abs(e.imag) <= e.err);
                CHECK(e.value == Approx(lambda_diag(l1, l0, at(alpha, 1.0)).value).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("bounds and monotonicity in t") {
    const double ts[] = {0.1, 0.2, 0.5, 1.0, 2.0, 3.5, 5.0};
    for (auto alpha : {Exponent(1, 1), Exponent(5, 3), Exponent(2, 1)}) {
        for (int l0 : {1, 20, 300}) {
            CAPTURE(alpha.to_string());
            CAPTURE(l0);
            double previous = -1.0;
            for (double t : ts) {
                CAPTURE(t);
                const auto pair = amplitudes_numeric(l0, at(alpha, t));
                CHECK(pair.b_tilde >= 0.0);
                CHECK(pair.b_tilde <= 1.0);
                CHECK(pair.a > 0.0);
                CHECK(pair.a <= 1.0);
                if (!pair.noise_floor) {
                    CHECK(pair.b_tilde > previous);
                    previous = pair.b_tilde;
                }
            }
        }
    }
}

TEST_CASE("agreement with the exact quadratic branch") {
    for (int l0 : {1, 3, 10, 30, 50}) {
        for (double t : {0.5, 1.0, 2.0}) {
            CAPTURE(l0);
            CAPTURE(t);
            const auto p = at(Exponent(2, 1), t);
            const auto q = amplitudes_numeric(l0, p);
            const auto e = exact_quadratic(l0, p);
            CHECK(std::abs(q.a / e.a - 1.0) < 1e-6);
            if (q.noise_floor)
                CHECK(e.b <= q.b);
            else
                CHECK(std::abs(q.b - e.b) <= q.err);
            if (q.err <= 1e-6 * std::abs(q.b)) CHECK(std::abs(q.b_tilde / e.b_tilde - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("noise floor is reported for vanishing crosstalk") {
    const auto pair = amplitudes_numeric(50, at(Exponent(2, 1), 0.1));
    CHECK(pair.noise_floor);
    CHECK(pair.b_tilde < 1e-12);
    // The reported b is an upper bound built from the raw value and its error.
    const auto raw = lambda_diag(-50, 50, at(Exponent(2, 1), 0.1));
    CHECK(raw.noise_floor);
    CHECK(pair.b == std::abs(raw.value) + raw.err);
    CHECK(pair.b > 0.0);
}

TEST_CASE("configuration validation") {
    QuadratureConfig cfg;
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    CHECK_THROWS_AS(lambda_diag(1, 1, at(Exponent(5, 3), 1.0), cfg), DomainError);
    CHECK_THROWS_AS(lambda_diag(0, 0, at(Exponent(5, 3), 1.0)), DomainError);
}

TEST_CASE("non-convergence names the grid point") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-15;
    cfg.abs_tol = 0.0;
    cfg.max_subdivisions = 1;
    try {
        lambda_diag(-40, 40, at(Exponent(5, 3), 3.0), cfg);
        FAIL("expected a ConvergenceError");
    } catch (const ConvergenceError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("alpha=5/3") != std::string::npos);
        CHECK(msg.find("l0=40") != std::string::npos);
        CHECK(msg.find("t=3") != std::string::npos);
    }
}

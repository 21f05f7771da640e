#include "doctest.h"

#include "oamlab/errors.hpp"
#include "oamlab/map_asymptotic.hpp"
#include "oamlab/montecarlo.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <numeric>

using namespace oamlab;
using doctest::Approx;

namespace {

TurbulenceParams at(Exponent alpha, double t) { return TurbulenceParams::from_strength(alpha, t); }

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "oamlab_test_montecarlo";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("default geometry") {
    const auto g = default_geometry(1, at(Exponent(5, 3), 0.5));
    CHECK(g.n == 512);
    CHECK(g.extent == Approx(32.0));
    const auto fine = default_geometry(1, at(Exponent(5, 3), 5.0));
    CHECK(fine.spacing() <= 0.2 / 4.0);
    CHECK((fine.n & (fine.n - 1)) == 0);
    CHECK_THROWS_AS(validate_geometry({500, 32.0}, at(Exponent(5, 3), 0.5)), DomainError);
    CHECK_THROWS_AS(validate_geometry({512, 4.0}, at(Exponent(5, 3), 0.5)), DomainError);
}

TEST_CASE("screens are reproducible from their seed") {
    const auto p = at(Exponent(5, 3), 0.5);
    const ScreenGeometry g{256, 32.0};
    const ScreenGenerator gen(p, g);
    const auto s1 = gen.generate(42);
    const auto s2 = generate_screen(p, g, 42);
    CHECK((s1.values == s2.values).all());
    const auto other = gen.generate(42, 1);
    CHECK_FALSE((s1.values == other.values).all());
    CHECK(other.component == 1);
    CHECK(sample_seed(7, 3) == sample_seed(7, 3));
    CHECK(sample_seed(7, 3) != sample_seed(7, 4));
    CHECK(sample_seed(7, 3) != sample_seed(8, 3));
    const auto m = ensemble_member(gen, 9, 5);
    CHECK((m.values == gen.generate(sample_seed(9, 2), 1).values).all());
    // Zero mean up to summation rounding.
    CHECK(std::abs(s1.values.mean()) < 1e-14 * s1.values.abs().sum());
}

TEST_CASE("bilinear sampling reproduces grid values") {
    const auto s = generate_screen(at(Exponent(5, 3), 0.5), {128, 32.0}, 3);
    const double dx = s.geometry.spacing();
    CHECK(s.sample((70 - 64) * dx, (50 - 64) * dx) == Approx(s.values(50, 70)).epsilon(1e-12));
    const double mid = s.sample((70.5 - 64) * dx, (50 - 64) * dx);
    CHECK(mid == Approx(0.5 * (s.values(50, 70) + s.values(50, 71))).epsilon(1e-12));
    CHECK_THROWS_AS(s.sample(100.0, 0.0), DomainError);
}

TEST_CASE("overlaps through a flat screen") {
    const auto p = at(Exponent(5, 3), 0.5);
    const ScreenGeometry g{512, 16.0};
    const auto flat = flat_screen(p, g);
    CHECK(std::abs(project_overlap(flat, 2, 2, 1.0) - 1.0) < 1e-3);
    CHECK(std::abs(project_overlap(flat, 2, -2, 1.0)) < 1e-3);
    CHECK(std::abs(project_overlap(flat, 1, 3, 1.0)) < 1e-3);
    const double c = 0.7;
    const auto shifted = flat_screen(p, g, c);
    CHECK(std::abs(project_overlap(shifted, 3, 3, 1.0) - std::polar(1.0, c)) < 1e-3);
    CHECK(std::abs(project_overlap(shifted, 3, 1, 1.0)) < 1e-3);
    CHECK_THROWS_AS(project_overlap(flat_screen(p, {64, 16.0}), 2, 2, 1.0), DomainError);
}

TEST_CASE("traced spectrum conserves probability") {
    const auto p = at(Exponent(5, 3), 1.0);
    const auto g = default_geometry(3, p);
    const auto screen = generate_screen(p, g, 11);
    const auto spectrum = traced_spectrum(screen, 3, 1.0);
    const double total = std::accumulate(spectrum.begin(), spectrum.end(), 0.0);
    CHECK(total == Approx(1.0).epsilon(1e-12));
    for (double v : spectrum) CHECK(v >= 0.0);
    const auto flat = traced_spectrum(flat_screen(p, g), 3, 1.0);
    CHECK(flat[0] == Approx(1.0).epsilon(1e-12));
    CHECK(flat[6] < 1e-20);
}

TEST_CASE("no turbulence gives exact amplitudes") {
    const auto r = estimate_amplitudes(2, at(Exponent(5, 3), 0.0), 100, 1);
    CHECK(r.pair.a == 1.0);
    CHECK(r.pair.b == 0.0);
    CHECK(r.pair.b_tilde == 0.0);
}

TEST_CASE("quadratic law ensemble against the exact amplitudes") {
    const auto p = at(Exponent(2, 1), 0.5);
    const auto r = estimate_amplitudes(1, p, 2000, 1);
    const auto e = exact_quadratic(1, p);
    CHECK(std::abs(r.pair.a - e.a) < 3.0 * r.pair.err_a);
    CHECK(std::abs(r.pair.b - e.b) < 3.0 * r.pair.err);
    CHECK(r.a.n_samples == 2000);
}

TEST_CASE("Kolmogorov ensemble against quadrature") {
    // map_numeric b_tilde at (5/3, l0 = 2, t = 0.5), checked against mpmath
    const double reference = 0.07328013668725737;
    const auto r = estimate_amplitudes(2, at(Exponent(5, 3), 0.5), 2000, 5);
    CHECK(std::abs(r.pair.b_tilde - reference) < 3.0 * r.pair.err_b_tilde);
}

TEST_CASE("estimates do not depend on the worker count") {
    const auto p = at(Exponent(2, 1), 1.0);
    setenv("OAMLAB_THREADS", "1", 1);
    const auto one = estimate_amplitudes(2, p, 200, 77);
    setenv("OAMLAB_THREADS", "3", 1);
    const auto three = estimate_amplitudes(2, p, 200, 77);
    unsetenv("OAMLAB_THREADS");
    CHECK(one.pair.a == three.pair.a);
    CHECK(one.pair.b == three.pair.b);
    CHECK(one.pair.err_b_tilde == three.pair.err_b_tilde);
}

TEST_CASE("statistical isotropy") {
    const auto p = at(Exponent(5, 3), 0.5);
    MonteCarloOptions rotated;
    rotated.ring.rotation = 0.4;
    const auto r0 = estimate_amplitudes(2, p, 200, 13);
    const auto r1 = estimate_amplitudes(2, p, 200, 13, rotated);
    CHECK(std::abs(r0.pair.a - r1.pair.a) < 2.0 * r0.pair.err_a);
    CHECK(std::abs(r0.pair.b - r1.pair.b) < 2.0 * r0.pair.err);
}

TEST_CASE("estimation errors") {
    const auto p = at(Exponent(2, 1), 0.5);
    CHECK_THROWS_AS(estimate_amplitudes(1, p, 99, 1), DomainError);
    CHECK_THROWS_AS(estimate_amplitudes(0, p, 100, 1), DomainError);
    MonteCarloOptions tight;
    tight.std_err_budget = 1e-9;
    CHECK_THROWS_AS(estimate_amplitudes(1, p, 100, 1, tight), ConvergenceError);
}

TEST_CASE("quadratic law screens have the target structure function") {
    const auto p = at(Exponent(2, 1), 0.5);  // r0 = 2
    const auto g = default_geometry(1, p);
    const auto acc = sample_structure(p, g, {0.0, 0.5, 2.0, 4.0}, 500, 21);
    CHECK(acc.count() == 500);
    const auto d = acc.structure_function();
    const auto c = acc.phase_factor();
    CHECK(d[0].mean == 0.0);
    for (std::size_t i = 1; i < d.size(); ++i) {
        const double target = structure_function(d[i].separation, p);
        CAPTURE(d[i].separation);
        CHECK(std::abs(d[i].mean - target) < 3.0 * d[i].std_err);
        CHECK(std::abs(c[i].mean - std::exp(-0.5 * target)) < 3.0 * c[i].std_err);
    }
    CHECK(d[2].separation == Approx(2.0));
    CHECK(std::abs(d[2].mean - 6.88) < 3.0 * d[2].std_err);
}

TEST_CASE("Kolmogorov screens have the target structure function") {
    const auto p = at(Exponent(5, 3), 0.5);  // r0 = 2
    const ScreenGeometry g{512, 51.2};  // dx = 0.1, so 0.2 r0 is a whole number of steps
    const auto acc = sample_structure(p, g, {0.1, 0.2, 0.4, 0.6, 1.0}, 500, 23);
    const auto d = acc.structure_function();
    for (const auto& e : d) {
        const double target = structure_function(e.separation, p);
        CAPTURE(e.separation);
        CHECK(std::abs(e.mean / target - 1.0) < 0.15);
    }
    CHECK(d[2].separation == Approx(0.4));
    CHECK(std::abs(d[2].mean / (6.88 * std::pow(0.2, 5.0 / 3.0)) - 1.0) < 0.15);
}

TEST_CASE("structure function helpers") {
    const auto p = at(Exponent(5, 3), 0.5);
    const ScreenGeometry g{128, 32.0};
    std::vector<PhaseScreen> screens{flat_screen(p, g), flat_screen(p, g, 2.0)};
    const auto d = measure_structure_function(screens, {0.0, 1.0});
    CHECK(d[1].mean == 0.0);
    CHECK_THROWS_AS(measure_structure_function(std::span<const PhaseScreen>{}, {1.0}), DomainError);
    CHECK_THROWS_AS(measure_structure_function(screens, {20.0}), DomainError);

    StructureAccumulator a(g, {1.0}), b(g, {1.0});
    a.add(generate_screen(p, g, 1));
    b.add(generate_screen(p, g, 2));
    a.merge(b);
    CHECK(a.count() == 2);
}

TEST_CASE("screen files round-trip") {
    const auto screen = ScreenGenerator(at(Exponent(5, 3), 0.5), {64, 32.0}).generate(99, 1);
    for (auto format : {ScreenFormat::csv, ScreenFormat::binary}) {
        const auto path = scratch_dir() / (format == ScreenFormat::csv ? "screen.csv" : "screen.bin");
        write_screen(path, screen, format);
        const auto back = read_screen(path);
        CHECK((back.values == screen.values).all());
        CHECK(back.seed == screen.seed);
        CHECK(back.component == 1);
        CHECK(back.geometry.n == 64);
        CHECK(back.geometry.extent == 32.0);
        CHECK(back.params.alpha.to_string() == "5/3");
        CHECK(back.params.r0 == screen.params.r0);
    }
    CHECK_THROWS_AS(read_screen(scratch_dir() / "missing.bin"), DomainError);
}

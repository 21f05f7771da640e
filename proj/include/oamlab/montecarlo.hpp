#pragma once

#include "oamlab/amplitudes.hpp"
#include "oamlab/turbulence.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <utility>
#include <span>
#include <vector>

namespace oamlab {

struct ScreenGeometry {
    int n = 512;          ///< samples per side, a power of two
    double extent = 32.0; ///< physical side length

    double spacing() const { return extent / n; }
};

/// Default grid for modes up to l0: extent = 16 max(w0 sqrt(l0/2 + 1), r0), n = 512
/// raised to the next power of two (at most 4096) until the spacing is at most
/// min(w0/16, r0/4) and resolves the azimuthal period of l0.
ScreenGeometry default_geometry(int l0, const TurbulenceParams& params);

/// Throws DomainError unless n is a power of two and extent >= 8 max(w0, r0).
void validate_geometry(const ScreenGeometry& geometry, const TurbulenceParams& params);

/// Sampled phase field. values(j, i) is the phase at x = (i - n/2) dx, y = (j - n/2) dx.
struct PhaseScreen {
    Eigen::ArrayXXd values;
    ScreenGeometry geometry;
    TurbulenceParams params;
    std::uint64_t seed = 0;
    int component = 0;  ///< 0: real part, 1: imaginary part of the synthesis for `seed`

    /// Bilinear interpolation at (x, y); the point must lie inside the grid.
    double sample(double x, double y) const;
};

/// Per-synthesis seed derived from the master seed and an index.
std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index);

/// Ensemble member i is component i % 2 of the synthesis seeded by sample_seed(master, i / 2).
PhaseScreen ensemble_member(const class ScreenGenerator& generator, std::uint64_t master, std::uint64_t index);

/// Random phase screens with D(x) = gamma (x/r0)^alpha. alpha < 2: FFT synthesis of a
/// kappa^-(alpha+2) spectrum with cell-averaged weights near the origin and 12
/// levels of 3x3 subharmonics. alpha = 2: random tilt with variance gamma/r0^2
/// per component. The real and imaginary parts of one synthesis are independent
/// screens; generate_pair returns both. Thread-safe after construction.
class ScreenGenerator {
public:
    ScreenGenerator(const TurbulenceParams& params, const ScreenGeometry& geometry);
    ~ScreenGenerator();
    ScreenGenerator(ScreenGenerator&&) noexcept;
    ScreenGenerator& operator=(ScreenGenerator&&) noexcept;

    PhaseScreen generate(std::uint64_t seed, int component = 0) const;
    std::pair<PhaseScreen, PhaseScreen> generate_pair(std::uint64_t seed) const;
    /// Same as above, reusing the storage of `first` and `second`.
    void generate_pair(std::uint64_t seed, PhaseScreen& first, PhaseScreen& second) const;

    const TurbulenceParams& params() const;
    const ScreenGeometry& geometry() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

PhaseScreen generate_screen(const TurbulenceParams& params, const ScreenGeometry& geometry, std::uint64_t seed);

/// Zero phase on the given grid.
PhaseScreen flat_screen(const TurbulenceParams& params, const ScreenGeometry& geometry, double constant = 0.0);

/// (1/2pi) integral of R_out R_in e^{i (l_in - l_out) theta} e^{i phi} r dr dtheta, by
/// Cartesian grid summation. Throws DomainError if the grid under-resolves the modes.
std::complex<double> project_overlap(const PhaseScreen& screen, int l_in, int l_out, double w0);

/// Ring quadrature used by the traced estimator.
struct RingOptions {
    int radial_nodes = 48;
    int angular_samples = 0;  ///< 0: max(128, next power of two >= 8 l0)
    double rotation = 0.0;    ///< angular offset applied to every ring (isotropy checks)
};

/// For each m in [-M/2, M/2), the radially traced element
///   integral r R_{l0}(r)^2 |F_m(r)|^2 dr,  F_m(r) = mean over theta of e^{i phi} e^{-i m theta}.
/// The entries sum to 1 for any screen (completeness over output modes). Index m is
/// stored at position m mod M.
std::vector<double> traced_spectrum(const PhaseScreen& screen, int l0, double w0, const RingOptions& opt = {});

struct OverlapEstimate {
    std::complex<double> mean{};
    double std_err = 0.0;
    long n_samples = 0;
};

struct MonteCarloOptions {
    std::optional<ScreenGeometry> geometry;
    RingOptions ring{};
    std::optional<double> std_err_budget;  ///< fail if the standard error on b_tilde exceeds this
};

struct MonteCarloResult {
    AmplitudePair pair;  ///< err_a, err are standard errors; err_b_tilde by the delta method
    OverlapEstimate a;
    OverlapEstimate b;
};

/// Ensemble estimate of a (m = 0) and b (m = +-2 l0) from traced_spectrum over
/// n_samples screens (>= 100). Deterministic for a given seed regardless of thread count.
MonteCarloResult estimate_amplitudes(int l0, const TurbulenceParams& params, long n_samples, std::uint64_t seed,
                                     const MonteCarloOptions& opt = {});

struct StructureEstimate {
    double separation = 0.0;  ///< realised separation (a whole number of grid steps)
    double mean = 0.0;
    double std_err = 0.0;
};

/// Accumulates per-screen spatial averages of [phi(r) - phi(r')]^2 along both grid
/// axes at fixed separations, and of cos(phi(r) - phi(r')).
class StructureAccumulator {
public:
    StructureAccumulator(const ScreenGeometry& geometry, std::vector<double> separations);

    void add(const PhaseScreen& screen);
    /// Appends another accumulator's samples after this one's.
    void merge(const StructureAccumulator& other);

    std::vector<StructureEstimate> structure_function() const;
    std::vector<StructureEstimate> phase_factor() const;
    long count() const { return static_cast<long>(d_samples_.size()); }

private:
    ScreenGeometry geometry_;
    std::vector<int> steps_;
    std::vector<std::vector<double>> d_samples_;
    std::vector<std::vector<double>> c_samples_;
};

/// Empirical structure function over an ensemble; separations must not exceed extent/2.
std::vector<StructureEstimate> measure_structure_function(std::span<const PhaseScreen> screens,
                                                          const std::vector<double>& separations);

/// Generates n_screens screens and measures D and the phase factor at the separations.
StructureAccumulator sample_structure(const TurbulenceParams& params, const ScreenGeometry& geometry,
                                      const std::vector<double>& separations, long n_screens, std::uint64_t seed);

enum class ScreenFormat { csv, binary };

/// Writes a one-line JSON header (geometry, seed, params) followed by the grid,
/// as CSV rows or little-endian float64 values.
void write_screen(const std::filesystem::path& path, const PhaseScreen& screen, ScreenFormat format);
PhaseScreen read_screen(const std::filesystem::path& path);

}  // namespace oamlab

#include "oamlab/montecarlo.hpp"

#include "oamlab/errors.hpp"
#include "oamlab/io.hpp"
#include "oamlab/lg_modes.hpp"
#include "oamlab/parallel.hpp"
#include "oamlab/quadrature.hpp"
#include "oamlab/specfun.hpp"

#include <json.hpp>
#include <unsupported/Eigen/FFT>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace oamlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kNearCells = 4;          // |i|, |j| <= 4 use cell-averaged weights
constexpr int kSubharmonicLevels = 12;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Power-law spectrum Phi(kappa) = K kappa^-(alpha+2) normalised so that
// 2 int d^2k Phi (1 - cos k.r) = gamma (r/r0)^alpha.
double spectrum_constant(const TurbulenceParams& p) {
    const double a = p.alpha.value();
    const double integral = std::exp(ln_gamma(1.0 - 0.5 * a) - ln_gamma(1.0 + 0.5 * a)) / (a * std::pow(2.0, a));
    return p.gamma * std::pow(p.r0, -a) / (4.0 * kPi * integral);
}

// Spectral weight of the square cell centred at (cx, cy) with side h: the cell
// integral of Phi kappa^2 divided by the centre's kappa^2, so that the small-r
// behaviour 2 w (1 - cos k.r) ~ w (k.r)^2 keeps the exact cell average.
double cell_weight(double K, double alpha, double cx, double cy, double h) {
    const auto& rule = quad::gauss_legendre(6);
    double sum = 0.0;
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            const double kx = cx + 0.5 * h * rule.nodes[a];
            const double ky = cy + 0.5 * h * rule.nodes[b];
            const double k2 = kx * kx + ky * ky;
            sum += rule.weights[a] * rule.weights[b] * K * std::pow(k2, -0.5 * alpha);
        }
    }
    return sum * 0.25 * h * h / (cx * cx + cy * cy);
}

double frequency(int index, int n, double dk) { return dk * (index < n / 2 ? index : index - n); }

}  // namespace

std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index) { return splitmix64(master ^ splitmix64(index)); }

ScreenGeometry default_geometry(int l0, const TurbulenceParams& params) {
    const double w0 = params.w0;
    const double l = std::abs(l0);
    ScreenGeometry g;
    g.extent = 16.0 * std::max(w0 * std::sqrt(l / 2.0 + 1.0), params.r0);
    double target = std::min(w0 / 16.0, params.r0 / 4.0);
    if (l > 0) target = std::min(target, 2.0 * kPi * w0 * std::sqrt(l / 2.0) / l / 8.0);
    g.n = 512;
    while (g.spacing() > target && g.n < 4096) g.n *= 2;
    return g;
}

void validate_geometry(const ScreenGeometry& g, const TurbulenceParams& params) {
    if (!is_power_of_two(g.n) || g.n < 8) throw DomainError("screen size n must be a power of two >= 8");
    if (!(g.extent >= 8.0 * std::max(params.w0, params.r0))) {
        std::ostringstream msg;
        msg << "screen extent " << g.extent << " is below 8 max(w0, r0) = " << 8.0 * std::max(params.w0, params.r0);
        throw DomainError(msg.str());
    }
}

double PhaseScreen::sample(double x, double y) const {
    const int n = geometry.n;
    const double fx = x / geometry.spacing() + 0.5 * n;
    const double fy = y / geometry.spacing() + 0.5 * n;
    const int i = static_cast<int>(std::floor(fx));
    const int j = static_cast<int>(std::floor(fy));
    if (i < 0 || j < 0 || i >= n - 1 || j >= n - 1) throw DomainError("PhaseScreen::sample: point outside the grid");
    const double u = fx - i;
    const double v = fy - j;
    return (1.0 - v) * ((1.0 - u) * values(j, i) + u * values(j, i + 1)) +
           v * ((1.0 - u) * values(j + 1, i) + u * values(j + 1, i + 1));
}

struct ScreenGenerator::Impl {
    TurbulenceParams params;
    ScreenGeometry geometry;
    bool tilt = false;
    Eigen::ArrayXXd sqrt_weight;  // (j, i) -> sqrt of the weight at (ky_j, kx_i)
    Eigen::MatrixXd sub_cos_x, sub_sin_x;  // (i, s) -> cos, sin of kx_s x_i
    Eigen::MatrixXcd sub_y;                // (j, s) -> exp(i ky_s y_j)
    Eigen::VectorXd sub_sqrt_weight;
};

ScreenGenerator::ScreenGenerator(const TurbulenceParams& params, const ScreenGeometry& geometry)
    : impl_(std::make_unique<Impl>()) {
    params.validate();
    validate_geometry(geometry, params);
    impl_->params = params;
    impl_->geometry = geometry;
    const double alpha = params.alpha.value();
    impl_->tilt = alpha >= 2.0;
    if (impl_->tilt) return;

    const int n = geometry.n;
    const double dk = 2.0 * kPi / geometry.extent;
    const double K = spectrum_constant(params);
    impl_->sqrt_weight.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double kx = frequency(i, n, dk);
            const double ky = frequency(j, n, dk);
            const int ii = i < n / 2 ? i : i - n;
            const int jj = j < n / 2 ? j : j - n;
            double w = 0.0;
            if (ii == 0 && jj == 0)
                w = 0.0;
            else if (std::abs(ii) <= kNearCells && std::abs(jj) <= kNearCells)
                w = cell_weight(K, alpha, kx, ky, dk);
            else
                w = K * std::pow(kx * kx + ky * ky, -0.5 * alpha - 1.0) * dk * dk;
            impl_->sqrt_weight(j, i) = std::sqrt(w);
        }
    }

    // 3x3 subharmonic grids, each level one third the spacing of the previous,
    // filling the central FFT cell.
    const int per_level = 8;
    const int count = kSubharmonicLevels * per_level;
    impl_->sub_cos_x.resize(n, count);
    impl_->sub_sin_x.resize(n, count);
    impl_->sub_y.resize(n, count);
    impl_->sub_sqrt_weight.resize(count);
    int s = 0;
    for (int level = 1; level <= kSubharmonicLevels; ++level) {
        const double d = dk / std::pow(3.0, level);
        for (int a = -1; a <= 1; ++a) {
            for (int b = -1; b <= 1; ++b) {
                if (a == 0 && b == 0) continue;
                const double kx = a * d;
                const double ky = b * d;
                impl_->sub_sqrt_weight[s] = std::sqrt(cell_weight(K, alpha, kx, ky, d));
                for (int p = 0; p < n; ++p) {
                    const double x = (p - 0.5 * n) * geometry.spacing();
                    impl_->sub_cos_x(p, s) = std::cos(kx * x);
                    impl_->sub_sin_x(p, s) = std::sin(kx * x);
                    impl_->sub_y(p, s) = std::polar(1.0, ky * x);
                }
                ++s;
            }
        }
    }
}

ScreenGenerator::~ScreenGenerator() = default;
ScreenGenerator::ScreenGenerator(ScreenGenerator&&) noexcept = default;
ScreenGenerator& ScreenGenerator::operator=(ScreenGenerator&&) noexcept = default;

const TurbulenceParams& ScreenGenerator::params() const { return impl_->params; }
const ScreenGeometry& ScreenGenerator::geometry() const { return impl_->geometry; }

std::pair<PhaseScreen, PhaseScreen> ScreenGenerator::generate_pair(std::uint64_t seed) const {
    std::pair<PhaseScreen, PhaseScreen> out;
    generate_pair(seed, out.first, out.second);
    return out;
}

void ScreenGenerator::generate_pair(std::uint64_t seed, PhaseScreen& first, PhaseScreen& second) const {
    const Impl& im = *impl_;
    const int n = im.geometry.n;
    const double dx = im.geometry.spacing();
    for (PhaseScreen* s : {&first, &second}) {
        s->geometry = im.geometry;
        s->params = im.params;
        s->seed = seed;
        s->values.resize(n, n);
    }
    first.component = 0;
    second.component = 1;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;

    if (im.tilt) {
        const double sigma = std::sqrt(im.params.gamma) / im.params.r0;
        for (PhaseScreen* s : {&first, &second}) {
            const double ax = sigma * normal(rng);
            const double ay = sigma * normal(rng);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s->values(j, i) = ax * (i - 0.5 * n) * dx + ay * (j - 0.5 * n) * dx;
        }
        return;
    }

    thread_local Eigen::MatrixXcd field;
    field.resize(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double re = normal(rng);
            const double im_part = normal(rng);
            field(j, i) = std::complex<double>(re, im_part) * im.sqrt_weight(j, i);
        }
    }
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    Eigen::VectorXcd in(n), res(n);
    for (int i = 0; i < n; ++i) {
        in = field.col(i);
        fft.inv(res, in);
        field.col(i) = res;
    }
    for (int j = 0; j < n; ++j) {
        in = field.row(j).transpose();
        fft.inv(res, in);
        field.row(j) = res.transpose();
    }

    // Subharmonics: sum_s c_s e^{i ky_s y} e^{i kx_s x} split into real products.
    const Eigen::Index count = im.sub_sqrt_weight.size();
    Eigen::VectorXcd coeff(count);
    for (Eigen::Index s = 0; s < count; ++s)
        coeff[s] = std::complex<double>(normal(rng), normal(rng)) * im.sub_sqrt_weight[s];
    const Eigen::MatrixXcd row_factor = im.sub_y * coeff.asDiagonal();  // (j, s) -> c_s e^{i ky_s y_j}
    const Eigen::MatrixXd re_part = row_factor.real(), im_part = row_factor.imag();
    first.values = field.real();
    first.values.matrix().noalias() += re_part * im.sub_cos_x.transpose();
    first.values.matrix().noalias() -= im_part * im.sub_sin_x.transpose();
    first.values -= first.values.mean();
    second.values = field.imag();
    second.values.matrix().noalias() += re_part * im.sub_sin_x.transpose();
    second.values.matrix().noalias() += im_part * im.sub_cos_x.transpose();
    second.values -= second.values.mean();
}

PhaseScreen ScreenGenerator::generate(std::uint64_t seed, int component) const {
    auto pair = generate_pair(seed);
    return component == 0 ? std::move(pair.first) : std::move(pair.second);
}

PhaseScreen ensemble_member(const ScreenGenerator& generator, std::uint64_t master, std::uint64_t index) {
    return generator.generate(sample_seed(master, index / 2), static_cast<int>(index % 2));
}

PhaseScreen generate_screen(const TurbulenceParams& params, const ScreenGeometry& geometry, std::uint64_t seed) {
    return ScreenGenerator(params, geometry).generate(seed);
}

PhaseScreen flat_screen(const TurbulenceParams& params, const ScreenGeometry& geometry, double constant) {
    validate_geometry(geometry, params);
    PhaseScreen screen;
    screen.geometry = geometry;
    screen.params = params;
    screen.values = Eigen::ArrayXXd::Constant(geometry.n, geometry.n, constant);
    return screen;
}

std::complex<double> project_overlap(const PhaseScreen& screen, int l_in, int l_out, double w0) {
    const int n = screen.geometry.n;
    const double dx = screen.geometry.spacing();
    const int lmax = std::max(std::abs(l_in), std::abs(l_out));
    if (dx > w0 / 16.0) throw DomainError("project_overlap: fewer than 16 samples across w0");
    if (lmax > 0 && 2.0 * kPi * w0 * std::sqrt(lmax / 2.0) / lmax < 8.0 * dx)
        throw DomainError("project_overlap: fewer than 8 samples per azimuthal period");
    if (0.5 * screen.geometry.extent < w0 * (std::sqrt(lmax / 2.0) + 6.0))
        throw DomainError("project_overlap: modes do not fit on the screen");

    const OamMode in{l_in, w0}, out{l_out, w0};
    const int dl = l_in - l_out;
    std::complex<double> sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double y = (j - 0.5 * n) * dx;
        for (int i = 0; i < n; ++i) {
            const double x = (i - 0.5 * n) * dx;
            const double r = std::hypot(x, y);
            const double amp = radial_profile(in, r) * radial_profile(out, r);
            if (amp == 0.0) continue;
            sum += amp * std::polar(1.0, dl * std::atan2(y, x) + screen.values(j, i));
        }
    }
    return sum * dx * dx / (2.0 * kPi);
}

std::vector<double> traced_spectrum(const PhaseScreen& screen, int l0, double w0, const RingOptions& opt) {
    const int l = std::abs(l0);
    int M = opt.angular_samples;
    if (M <= 0) M = std::max(128, static_cast<int>(std::bit_ceil(static_cast<unsigned>(8 * std::max(l, 1)))));
    if (M <= 4 * l) throw DomainError("traced_spectrum: angular samples must exceed 4 l0");
    const double r_max = w0 * (std::sqrt(l / 2.0) + 5.5);
    if (r_max >= 0.5 * screen.geometry.extent - screen.geometry.spacing())
        throw DomainError("traced_spectrum: mode does not fit on the screen");

    const auto& rule = quad::gauss_legendre(opt.radial_nodes);
    const OamMode mode{l0, w0};
    std::vector<double> spectrum(M, 0.0);
    Eigen::FFT<double> fft;
    Eigen::VectorXcd ring(M), coeffs(M);
    for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
        const double r = 0.5 * r_max * (rule.nodes[k] + 1.0);
        const double weight = 0.5 * r_max * rule.weights[k] * r * std::pow(radial_profile(mode, r), 2);
        if (weight == 0.0) continue;
        for (int m = 0; m < M; ++m) {
            const double theta = 2.0 * kPi * m / M + opt.rotation;
            ring[m] = std::polar(1.0, screen.sample(r * std::cos(theta), r * std::sin(theta)));
        }
        fft.fwd(coeffs, ring);
        for (int m = 0; m < M; ++m) spectrum[m] += weight * std::norm(coeffs[m] / static_cast<double>(M));
    }
    return spectrum;
}

namespace {

double mean_of(std::span<const double> v) {
    return pairwise_reduce<double>(v, 0.0, std::plus<>()) / static_cast<double>(v.size());
}

double covariance(std::span<const double> x, double mx, std::span<const double> y, double my) {
    std::vector<double> prod(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
    return pairwise_reduce<double>(prod, 0.0, std::plus<>()) / static_cast<double>(x.size() - 1);
}

}  // namespace

MonteCarloResult estimate_amplitudes(int l0, const TurbulenceParams& params, long n_samples, std::uint64_t seed,
                                     const MonteCarloOptions& opt) {
    if (l0 < 1) throw DomainError("estimate_amplitudes: l0 must be positive");
    if (n_samples < 100) throw DomainError("estimate_amplitudes: need at least 100 samples");
    MonteCarloResult out;
    out.pair.method = Method::montecarlo;
    out.a.n_samples = out.b.n_samples = n_samples;
    if (params.strength() == 0.0) {
        out.a.mean = 1.0;
        return out;
    }

    const ScreenGeometry geometry = opt.geometry.value_or(default_geometry(l0, params));
    const ScreenGenerator generator(params, geometry);
    std::vector<double> a(n_samples), b(n_samples);
    const std::size_t pairs = (static_cast<std::size_t>(n_samples) + 1) / 2;
    parallel_for(pairs, [&](std::size_t k) {
        thread_local PhaseScreen first, second;
        generator.generate_pair(sample_seed(seed, k), first, second);
        for (int c = 0; c < 2; ++c) {
            const std::size_t i = 2 * k + c;
            if (i >= a.size()) break;
            const auto spectrum = traced_spectrum(c == 0 ? first : second, l0, params.w0, opt.ring);
            const std::size_t M = spectrum.size();
            a[i] = spectrum[0];
            b[i] = 0.5 * (spectrum[(2 * l0) % M] + spectrum[(M - (2 * l0) % M) % M]);
        }
    });

    const double N = static_cast<double>(n_samples);
    const double ma = mean_of(a), mb = mean_of(b);
    const double va = covariance(a, ma, a, ma), vb = covariance(b, mb, b, mb), cab = covariance(a, ma, b, mb);
    out.a.mean = ma;
    out.a.std_err = std::sqrt(va / N);
    out.b.mean = mb;
    out.b.std_err = std::sqrt(vb / N);

    AmplitudePair& p = out.pair;
    p.a = ma;
    p.b = mb;
    p.b_tilde = mb / ma;
    p.err_a = out.a.std_err;
    p.err = out.b.std_err;
    const double rel_var = vb / (mb * mb) + va / (ma * ma) - 2.0 * cab / (ma * mb);
    p.err_b_tilde = std::abs(p.b_tilde) * std::sqrt(std::max(0.0, rel_var) / N);
    p.noise_floor = std::abs(mb) < 3.0 * p.err;
    if (opt.std_err_budget && p.err_b_tilde > *opt.std_err_budget) {
        std::ostringstream msg;
        msg << "montecarlo: standard error " << p.err_b_tilde << " on b_tilde exceeds the budget "
            << *opt.std_err_budget << " with " << n_samples << " samples (alpha=" << params.alpha.to_string()
            << ", l0=" << l0 << ", t=" << params.strength() << ")";
        throw ConvergenceError(msg.str(), p.err_b_tilde);
    }
    return out;
}

StructureAccumulator::StructureAccumulator(const ScreenGeometry& geometry, std::vector<double> separations)
    : geometry_(geometry) {
    for (double s : separations) {
        if (!(s >= 0.0) || s > 0.5 * geometry.extent)
            throw DomainError("structure function separations must lie in [0, extent/2]");
        steps_.push_back(static_cast<int>(std::lround(s / geometry.spacing())));
    }
}

void StructureAccumulator::add(const PhaseScreen& screen) {
    const Eigen::ArrayXXd& v = screen.values;
    const Eigen::Index n = v.rows();
    std::vector<double> d(steps_.size()), c(steps_.size());
    for (std::size_t s = 0; s < steps_.size(); ++s) {
        const Eigen::Index k = steps_[s];
        if (k == 0) {
            d[s] = 0.0;
            c[s] = 1.0;
            continue;
        }
        const Eigen::ArrayXXd dxs = v.rightCols(n - k) - v.leftCols(n - k);
        const Eigen::ArrayXXd dys = v.bottomRows(n - k) - v.topRows(n - k);
        d[s] = 0.5 * (dxs.square().mean() + dys.square().mean());
        c[s] = 0.5 * (dxs.cos().mean() + dys.cos().mean());
    }
    d_samples_.push_back(std::move(d));
    c_samples_.push_back(std::move(c));
}

void StructureAccumulator::merge(const StructureAccumulator& other) {
    d_samples_.insert(d_samples_.end(), other.d_samples_.begin(), other.d_samples_.end());
    c_samples_.insert(c_samples_.end(), other.c_samples_.begin(), other.c_samples_.end());
}

namespace {

std::vector<StructureEstimate> summarise(const std::vector<std::vector<double>>& samples, const std::vector<int>& steps,
                                         double dx) {
    std::vector<StructureEstimate> out;
    const std::size_t N = samples.size();
    for (std::size_t s = 0; s < steps.size(); ++s) {
        std::vector<double> column(N);
        for (std::size_t i = 0; i < N; ++i) column[i] = samples[i][s];
        StructureEstimate e;
        e.separation = steps[s] * dx;
        if (N > 0) e.mean = mean_of(column);
        if (N > 1) e.std_err = std::sqrt(covariance(column, e.mean, column, e.mean) / static_cast<double>(N));
        out.push_back(e);
    }
    return out;
}

}  // namespace

std::vector<StructureEstimate> StructureAccumulator::structure_function() const {
    return summarise(d_samples_, steps_, geometry_.spacing());
}

std::vector<StructureEstimate> StructureAccumulator::phase_factor() const {
    return summarise(c_samples_, steps_, geometry_.spacing());
}

std::vector<StructureEstimate> measure_structure_function(std::span<const PhaseScreen> screens,
                                                          const std::vector<double>& separations) {
    if (screens.empty()) throw DomainError("measure_structure_function: empty ensemble");
    StructureAccumulator acc(screens.front().geometry, separations);
    for (const auto& s : screens) acc.add(s);
    return acc.structure_function();
}

StructureAccumulator sample_structure(const TurbulenceParams& params, const ScreenGeometry& geometry,
                                      const std::vector<double>& separations, long n_screens, std::uint64_t seed) {
    const ScreenGenerator generator(params, geometry);
    std::vector<StructureAccumulator> parts((n_screens + 1) / 2, StructureAccumulator(geometry, separations));
    parallel_for(parts.size(), [&](std::size_t k) {
        thread_local PhaseScreen first, second;
        generator.generate_pair(sample_seed(seed, k), first, second);
        parts[k].add(first);
        if (2 * static_cast<long>(k) + 1 < n_screens) parts[k].add(second);
    });
    StructureAccumulator total(geometry, separations);
    for (const auto& p : parts) total.merge(p);
    return total;
}

void write_screen(const std::filesystem::path& path, const PhaseScreen& screen, ScreenFormat format) {
    const nlohmann::ordered_json header = {
        {"schema", "oamlab.screen.v1"},
        {"format", format == ScreenFormat::csv ? "csv" : "f64le"},
        {"n", screen.geometry.n},
        {"extent", screen.geometry.extent},
        {"seed", screen.seed},
        {"component", screen.component},
        {"alpha", screen.params.alpha.to_string()},
        {"gamma", screen.params.gamma},
        {"r0", screen.params.r0},
        {"w0", screen.params.w0},
    };
    std::string content = header.dump() + "\n";
    const int n = screen.geometry.n;
    if (format == ScreenFormat::csv) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                if (i) content += ',';
                content += io::format_double(screen.values(j, i));
            }
            content += '\n';
        }
    } else {
        static_assert(std::endian::native == std::endian::little, "binary screen dumps assume little-endian hosts");
        const std::size_t offset = content.size();
        content.resize(offset + sizeof(double) * n * n);
        char* dst = content.data() + offset;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i, dst += sizeof(double)) {
                const double v = screen.values(j, i);
                std::memcpy(dst, &v, sizeof(double));
            }
    }
    io::write_file_atomic(path, content);
}

PhaseScreen read_screen(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open screen file " + path.string());
    std::string line;
    std::getline(in, line);
    const auto header = nlohmann::json::parse(line);
    PhaseScreen screen;
    screen.geometry.n = header.at("n").get<int>();
    screen.geometry.extent = header.at("extent").get<double>();
    screen.seed = header.at("seed").get<std::uint64_t>();
    screen.component = header.value("component", 0);
    screen.params.alpha = Exponent::parse(header.at("alpha").get<std::string>());
    screen.params.gamma = header.at("gamma").get<double>();
    screen.params.r0 = header.at("r0").get<double>();
    screen.params.w0 = header.at("w0").get<double>();
    const int n = screen.geometry.n;
    screen.values.resize(n, n);
    if (header.at("format").get<std::string>() == "csv") {
        for (int j = 0; j < n; ++j) {
            std::getline(in, line);
            std::istringstream row(line);
            std::string cell;
            for (int i = 0; i < n; ++i) {
                std::getline(row, cell, ',');
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc()) throw DomainError("malformed value in screen file " + path.string());
                screen.values(j, i) = v;
            }
        }
    } else {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double v = 0.0;
                in.read(reinterpret_cast<char*>(&v), sizeof(double));
                screen.values(j, i) = v;
            }
    }
    if (!in) throw DomainError("truncated screen file " + path.string());
    return screen;
}

}  // namespace oamlab

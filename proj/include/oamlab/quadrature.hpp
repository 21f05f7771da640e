#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

namespace oamlab::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;
};

/// Nodes and weights of the n-point Gauss-Legendre rule (Newton on P_n).
/// Results are cached per order; the returned reference stays valid.
const GaussRule& gauss_legendre(int n);

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` equal panels.
template <typename F>
double integrate_fixed(F&& f, double a, double b, int panels, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double acc = 0.0;
        for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

struct AdaptiveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-16;
    int max_subdivisions = 200'000;
};

template <typename T>
struct IntegrationResult {
    T value{};
    double error = 0.0;     ///< truncation estimate plus roundoff floor
    double roundoff = 0.0;  ///< roundoff floor alone (50 eps * integral of |f|)
    long evaluations = 0;
    std::size_t segments = 0;
    bool converged = false;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Segment {
    double a, b;
    T value;
    double error;     // truncation estimate
    double roundoff;  // 50 eps * integral of |f|
    bool splittable;

    double excess() const { return splittable ? std::max(0.0, error - roundoff) : 0.0; }
};

template <typename T, typename F>
Segment<T> kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(center);
    T result_k = fc * kWgk[7];
    T result_g = fc * kWg[3];
    double resabs = magnitude(fc) * kWgk[7];
    std::array<T, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        result_k += (f1[j] + f2[j]) * kWgk[j];
        resabs += kWgk[j] * (magnitude(f1[j]) + magnitude(f2[j]));
        if (j % 2 == 1) result_g += (f1[j] + f2[j]) * kWg[j / 2];
    }
    const T mean = result_k * 0.5;
    double resasc = kWgk[7] * magnitude(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (magnitude(f1[j] - mean) + magnitude(f2[j] - mean));

    const double scale = std::abs(half);
    T value = result_k * half;
    resabs *= scale;
    resasc *= scale;
    double err = magnitude((result_k - result_g) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double floor = 50.0 * eps * resabs;
    err = std::max(err, floor);
    const bool splittable = (b - a) > 1e-14 * std::max(std::abs(a), std::abs(b)) + 1e-300;
    return {a, b, value, err, floor, splittable};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration over consecutive panels given by
/// `edges`. The panel with the largest error above its roundoff floor is
/// bisected until the summed error meets max(abs_tol, rel_tol*|I|) or only
/// roundoff is left.
///
/// T is double or std::complex<double>.
template <typename T, typename F>
IntegrationResult<T> integrate_panels(F&& f, std::span<const double> edges, const AdaptiveOptions& opt = {}) {
    using Seg = detail::Segment<T>;
    IntegrationResult<T> out;
    std::vector<Seg> segs;
    segs.reserve(edges.size() * 2);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i + 1] <= edges[i]) continue;
        segs.push_back(detail::kronrod15<T>(f, edges[i], edges[i + 1]));
        out.evaluations += 15;
    }
    auto by_excess = [&segs](std::size_t i, std::size_t j) { return segs[i].excess() < segs[j].excess(); };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_excess)> heap(by_excess);
    T total{};
    double err = 0.0, roundoff = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        heap.push(i);
        total += segs[i].value;
        err += segs[i].error;
        roundoff += segs[i].roundoff;
    }

    int splits = 0;
    while (!heap.empty()) {
        const double tol = std::max({opt.abs_tol, opt.rel_tol * magnitude(total), roundoff});
        if (err <= tol) {
            out.converged = true;
            break;
        }
        const std::size_t worst = heap.top();
        if (segs[worst].excess() <= 0.0) {
            // Nothing left that bisection can improve.
            out.converged = err <= std::max(opt.abs_tol, opt.rel_tol * magnitude(total)) ||
                            err <= 2.0 * roundoff;
            break;
        }
        if (splits >= opt.max_subdivisions) break;
        heap.pop();
        const Seg parent = segs[worst];
        const double mid = 0.5 * (parent.a + parent.b);
        Seg left = detail::kronrod15<T>(f, parent.a, mid);
        Seg right = detail::kronrod15<T>(f, mid, parent.b);
        out.evaluations += 30;
        ++splits;
        total += left.value + right.value - parent.value;
        err += left.error + right.error - parent.error;
        roundoff += left.roundoff + right.roundoff - parent.roundoff;
        segs[worst] = left;
        segs.push_back(right);
        heap.push(worst);
        heap.push(segs.size() - 1);
    }

    // Re-sum from scratch; the running totals above accumulate cancellation.
    T clean{};
    double clean_err = 0.0, clean_round = 0.0;
    for (const Seg& s : segs) {
        clean += s.value;
        clean_err += s.error;
        clean_round += s.roundoff;
    }
    out.value = clean;
    out.error = clean_err;
    out.roundoff = clean_round;
    out.segments = segs.size();
    return out;
}

template <typename T, typename F>
IntegrationResult<T> integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
    const std::array<double, 2> edges{a, b};
    return integrate_panels<T>(std::forward<F>(f), std::span<const double>(edges), opt);
}

}  // namespace oamlab::quad

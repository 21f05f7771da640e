#include "oamlab/cli.hpp"

#include "oamlab/errors.hpp"
#include "oamlab/io.hpp"
#include "oamlab/map_asymptotic.hpp"
#include "oamlab/map_numeric.hpp"
#include "oamlab/montecarlo.hpp"
#include "oamlab/parallel.hpp"
#include "oamlab/universal.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace oamlab::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Flat JSON object -> CLI11 config items for the active subcommand.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(std::string section) : section_(std::move(section)) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json doc;
        try {
            doc = json::parse(input);
        } catch (const json::parse_error& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!doc.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : doc.items()) {
            // Accepts the echoed configuration of a previous run: null means unset.
            if (value.is_null()) continue;
            if (key == "command") {
                if (value != section_) throw CLI::ConversionError("config file is for command " + value.dump());
                continue;
            }
            CLI::ConfigItem item;
            item.parents = {section_};
            item.name = key;
            std::replace(item.name.begin(), item.name.end(), '_', '-');
            if (value.is_array()) {
                for (const auto& v : value) item.inputs.push_back(scalar(v));
            } else {
                item.inputs.push_back(scalar(value));
            }
            items.push_back(std::move(item));
        }
        return items;
    }

private:
    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConversionError("config values must be strings, numbers, booleans or arrays of them");
    }

    std::string section_;
};

std::string bool_cell(bool v) { return v ? "true" : "false"; }

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& n : names) {
        const auto m = parse_method(n);
        if (!m) throw DomainError("unknown method '" + n + "'");
        out.push_back(*m);
    }
    return out;
}

std::vector<Exponent> parse_alphas(const std::vector<std::string>& texts) {
    std::vector<Exponent> out;
    for (const auto& s : texts) out.push_back(Exponent::parse(s));
    return out;
}

struct PointSettings {
    QuadratureConfig quadrature{};
    std::optional<double> beta;
    int series_terms = 3;
    long samples = 2000;
    std::uint64_t seed = 1;
    std::optional<int> grid_n;
    std::optional<double> extent;
    int radial_nodes = 48;
    int angular_samples = 0;
    std::optional<double> std_err_budget;

    json to_json() const {
        json j;
        j["rel_tol"] = quadrature.rel_tol;
        j["abs_tol"] = quadrature.abs_tol;
        j["beta"] = beta ? json(*beta) : json(nullptr);
        j["terms"] = series_terms;
        j["samples"] = samples;
        j["seed"] = seed;
        j["n"] = grid_n ? json(*grid_n) : json(nullptr);
        j["extent"] = extent ? json(*extent) : json(nullptr);
        j["radial_nodes"] = radial_nodes;
        j["angular_samples"] = angular_samples;
        j["std_err_budget"] = std_err_budget ? json(*std_err_budget) : json(nullptr);
        return j;
    }
};

void add_point_options(CLI::App* sub, PointSettings& s) {
    sub->add_option("--rel-tol", s.quadrature.rel_tol, "quadrature relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--abs-tol", s.quadrature.abs_tol, "quadrature absolute tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--beta", s.beta, "contour rotation angle (asymptotic, alpha not 1 or 2)");
    sub->add_option("--terms", s.series_terms, "series terms")->check(CLI::Range(1, 50));
    sub->add_option("--samples", s.samples, "Monte Carlo screens")->check(CLI::Range(100L, 100'000'000L));
    sub->add_option("--seed", s.seed, "Monte Carlo master seed");
    sub->add_option("--n", s.grid_n, "screen samples per side (power of two)");
    sub->add_option("--extent", s.extent, "screen side length in units of w0")->check(CLI::PositiveNumber);
    sub->add_option("--radial-nodes", s.radial_nodes, "ring estimator radial nodes")->check(CLI::Range(8, 1024));
    sub->add_option("--angular-samples", s.angular_samples, "ring estimator angular samples (0: automatic)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--std-err-budget", s.std_err_budget, "fail if the b_tilde standard error exceeds this")
        ->check(CLI::PositiveNumber);
}

MonteCarloOptions mc_options(int l0, const TurbulenceParams& params, const PointSettings& s) {
    MonteCarloOptions opt;
    if (s.grid_n || s.extent) {
        ScreenGeometry g = default_geometry(l0, params);
        if (s.grid_n) g.n = *s.grid_n;
        if (s.extent) g.extent = *s.extent * params.w0;
        opt.geometry = g;
    }
    opt.ring.radial_nodes = s.radial_nodes;
    opt.ring.angular_samples = s.angular_samples;
    opt.std_err_budget = s.std_err_budget;
    return opt;
}

AmplitudePair compute_point(const Exponent& alpha, int l0, double t, Method method, const PointSettings& s) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("t must be finite and non-negative");
    if (l0 < 1) throw DomainError("l0 must be a positive integer");
    const TurbulenceParams params = TurbulenceParams::from_strength(alpha, t);
    switch (method) {
    case Method::quadrature:
        return amplitudes_numeric(l0, params, s.quadrature);
    case Method::asymptotic:
        return amplitudes_asymptotic(l0, params, s.beta);
    case Method::series: {
        if (alpha.is_linear() || alpha.is_quadratic())
            throw DomainError("the series method needs 1 < alpha < 2 (closed forms cover alpha = 1 and 2)");
        const SeriesResult r = b_series(l0, params, s.series_terms);
        AmplitudePair p;
        p.method = Method::series;
        p.a = kNaN;
        p.b = kNaN;
        p.b_tilde = r.b_tilde;
        p.err = kNaN;
        p.err_a = kNaN;
        p.err_b_tilde = r.terms.empty() ? 0.0 : std::abs(r.terms.back());
        p.advisory = r.diverging;
        return p;
    }
    case Method::exact_quadratic:
        return exact_quadratic(l0, params);
    case Method::montecarlo:
        return estimate_amplitudes(l0, params, s.samples, s.seed, mc_options(l0, params, s)).pair;
    }
    throw DomainError("unhandled method");
}

const std::vector<std::string> kAmplitudeColumns{"alpha", "l0",    "t",     "method",     "a",           "b",
                                                 "b_tilde", "err_a", "err_b", "err_b_tilde", "noise_floor", "advisory"};

std::vector<std::string> amplitude_cells(const Exponent& alpha, int l0, double t, const AmplitudePair& p) {
    return {alpha.to_string(),         std::to_string(l0),          io::format_double(t),
            std::string(to_string(p.method)), io::format_double(p.a),  io::format_double(p.b),
            io::format_double(p.b_tilde), io::format_double(p.err_a), io::format_double(p.err),
            io::format_double(p.err_b_tilde), bool_cell(p.noise_floor), bool_cell(p.advisory)};
}

json amplitude_json(const Exponent& alpha, int l0, double t, const AmplitudePair& p) {
    json j;
    j["alpha"] = alpha.to_string();
    j["l0"] = l0;
    j["t"] = t;
    j["method"] = std::string(to_string(p.method));
    j["a"] = number(p.a);
    j["b"] = number(p.b);
    j["b_tilde"] = number(p.b_tilde);
    j["err_a"] = number(p.err_a);
    j["err_b"] = number(p.err);
    j["err_b_tilde"] = number(p.err_b_tilde);
    j["noise_floor"] = p.noise_floor;
    j["advisory"] = p.advisory;
    return j;
}

json table_json(const Table& table, const json& config) {
    json rows = json::array();
    for (const auto& r : table.rows) {
        json row;
        for (std::size_t c = 0; c < table.columns.size(); ++c) row[table.columns[c]] = r[c];
        rows.push_back(std::move(row));
    }
    return json{{"schema", kSchema}, {"config", config}, {"rows", rows}};
}

// Writes to the named file, or to `out` when the path is empty.
void deliver(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        out.flush();
    } else {
        io::write_file_atomic(path, content);
    }
}

enum class Format { csv, json };

std::string render(const Table& table, const json& config, Format format) {
    if (format == Format::csv) return render_csv(table, config.dump());
    return table_json(table, config).dump(2) + "\n";
}

const std::map<std::string, Format> kFormats{{"csv", Format::csv}, {"json", Format::json}};

std::vector<double> log_space(double lo, double hi, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        v[i] = std::pow(10.0, std::log10(lo) + f * (std::log10(hi) - std::log10(lo)));
    }
    if (count > 1) {
        v.front() = lo;
        v.back() = hi;
    }
    return v;
}

std::vector<double> lin_space(double lo, double hi, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return v;
}

std::string alpha_tag(const Exponent& alpha) {
    std::string s = alpha.to_string();
    std::replace(s.begin(), s.end(), '/', '_');
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

const std::vector<Exponent> kUniversalAlphas{Exponent(1, 1), Exponent(5, 3), Exponent(2, 1)};

json figure_config(FigureId id, const FigureOptions& opt) {
    json j;
    j["figure"] = std::string(to_string(id));
    switch (id) {
    case FigureId::fig1a:
    case FigureId::fig1b:
    case FigureId::fig1c:
        j["l0"] = opt.l0_grid;
        j["t"] = opt.t_list;
        break;
    case FigureId::fig2:
        j["x_points"] = opt.x_points_fig2;
        j["x_range"] = {1e-2, 10.0};
        j["x_spacing"] = "log";
        break;
    case FigureId::fig3:
        j["x_points"] = opt.x_points_fig3;
        j["x_range"] = {0.0, 1.2};
        j["x_spacing"] = "linear";
        break;
    }
    return j;
}

Table fig1_table(const Exponent& alpha, const FigureOptions& opt) {
    Table table;
    table.columns = {"l0", "t", "b_tilde_quadrature", "err_b_tilde_quadrature", "noise_floor"};
    if (alpha.is_quadratic()) table.columns.push_back("b_tilde_exact");
    table.columns.push_back("b_tilde_asymptotic");
    if (!alpha.is_linear() && !alpha.is_quadratic()) table.columns.push_back("b_tilde_series");

    struct Point {
        int l0;
        double t;
    };
    std::vector<Point> points;
    for (double t : opt.t_list)
        for (int l0 : opt.l0_grid) points.push_back({l0, t});
    table.rows.resize(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const auto [l0, t] = points[i];
        const TurbulenceParams params = TurbulenceParams::from_strength(alpha, t);
        const AmplitudePair q = amplitudes_numeric(l0, params);
        std::vector<std::string> row{std::to_string(l0), io::format_double(t), io::format_double(q.b_tilde),
                                     io::format_double(q.err_b_tilde), bool_cell(q.noise_floor)};
        if (alpha.is_quadratic()) row.push_back(io::format_double(exact_quadratic(l0, params).b_tilde));
        row.push_back(io::format_double(amplitudes_asymptotic(l0, params).b_tilde));
        if (!alpha.is_linear() && !alpha.is_quadratic())
            row.push_back(io::format_double(b_series(l0, params, 3).b_tilde));
        table.rows[i] = std::move(row);
    });
    return table;
}

Table fig2_table(const FigureOptions& opt) {
    Table table;
    table.columns = {"x"};
    for (const auto& a : kUniversalAlphas) table.columns.push_back("b_tilde_alpha_" + alpha_tag(a));
    table.columns.push_back("b_tilde_series_alpha_5_3");
    const auto xs = log_space(1e-2, 10.0, opt.x_points_fig2);
    table.rows.resize(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        std::vector<std::string> row{io::format_double(xs[i])};
        for (const auto& a : kUniversalAlphas) row.push_back(io::format_double(btilde_universal(xs[i], a)));
        row.push_back(io::format_double(btilde_series_universal(xs[i], Exponent(5, 3), 3)));
        table.rows[i] = std::move(row);
    });
    return table;
}

Table fig3_table(const FigureOptions& opt) {
    Table table;
    table.columns = {"x"};
    for (const auto& a : kUniversalAlphas) table.columns.push_back("concurrence_alpha_" + alpha_tag(a));
    table.columns.push_back("concurrence_fit");
    const auto xs = lin_space(0.0, 1.2, opt.x_points_fig3);
    table.rows.resize(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        std::vector<std::string> row{io::format_double(xs[i])};
        for (const auto& a : kUniversalAlphas)
            row.push_back(io::format_double(concurrence(btilde_universal(xs[i], a))));
        row.push_back(io::format_double(leonhard_fit(xs[i])));
        table.rows[i] = std::move(row);
    });
    return table;
}

// Subcommand state. Each run_* builds its echo config from the parsed values.

struct AmplitudesArgs {
    std::string alpha = "5/3";
    int l0 = 1;
    double t = 0.0;
    std::string method = "quadrature";
    std::string format = "json";
    std::string output;
    PointSettings point;
};

struct SweepArgs {
    std::vector<std::string> alphas{"5/3"};
    std::vector<int> l0s;
    std::vector<double> ts;
    std::vector<std::string> methods{"quadrature"};
    std::string format = "csv";
    std::string output;
    PointSettings point;
};

struct UniversalArgs {
    std::vector<std::string> alphas{"1", "5/3", "2"};
    std::vector<double> xs;
    double x_min = 1e-2;
    double x_max = 10.0;
    int x_count = 61;
    bool log_x = false;
    int l0_star = kRepresentativeL0;
    std::string format = "csv";
    std::string output;
};

struct ConcurrenceArgs {
    std::vector<double> b_tildes;
    std::vector<double> concurrences;
    std::string format = "json";
    std::string output;
};

struct MonteCarloArgs {
    std::string alpha = "5/3";
    int l0 = 1;
    double t = 0.5;
    std::string format = "json";
    std::string output;
    std::vector<double> separations;
    long structure_screens = 200;
    std::string structure_output;
    std::string dump_screen;
    std::string screen_format = "binary";
    PointSettings point;
};

struct FiguresArgs {
    std::vector<std::string> which{"1a", "1b", "1c", "2", "3"};
    std::string outdir;
    std::vector<int> l0s;
    std::vector<double> ts;
};

int run_amplitudes(const AmplitudesArgs& args, std::ostream& out) {
    const Exponent alpha = Exponent::parse(args.alpha);
    const auto method = parse_method(args.method);
    if (!method) throw DomainError("unknown method '" + args.method + "'");
    const AmplitudePair p = compute_point(alpha, args.l0, args.t, *method, args.point);

    json config = args.point.to_json();
    config["command"] = "amplitudes";
    config["alpha"] = alpha.to_string();
    config["l0"] = args.l0;
    config["t"] = args.t;
    config["method"] = args.method;
    if (kFormats.at(args.format) == Format::json) {
        json j = amplitude_json(alpha, args.l0, args.t, p);
        j["schema"] = kSchema;
        j["config"] = config;
        deliver(args.output, j.dump(2) + "\n", out);
    } else {
        Table table{kAmplitudeColumns, {amplitude_cells(alpha, args.l0, args.t, p)}};
        deliver(args.output, render_csv(table, config.dump()), out);
    }
    return kSuccess;
}

int run_sweep(const SweepArgs& args, std::ostream& out) {
    const auto alphas = parse_alphas(args.alphas);
    const auto methods = parse_methods(args.methods);
    if (alphas.empty() || args.l0s.empty() || args.ts.empty() || methods.empty())
        throw DomainError("sweep needs non-empty --alpha, --l0, --t and --methods lists");
    for (const auto& a : alphas) {
        for (Method m : methods) {
            if (m == Method::exact_quadratic && !a.is_quadratic())
                throw DomainError("exact_quadratic is only valid for alpha = 2, got " + a.to_string());
            if (m == Method::series && (a.is_linear() || a.is_quadratic()))
                throw DomainError("series is not available for alpha = " + a.to_string());
        }
    }
    struct Point {
        Exponent alpha;
        int l0;
        double t;
        Method method;
    };
    std::vector<Point> points;
    for (const auto& a : alphas)
        for (int l0 : args.l0s)
            for (double t : args.ts)
                for (Method m : methods) points.push_back({a, l0, t, m});

    Table table;
    table.columns = kAmplitudeColumns;
    table.rows.resize(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const Point& p = points[i];
        table.rows[i] = amplitude_cells(p.alpha, p.l0, p.t, compute_point(p.alpha, p.l0, p.t, p.method, args.point));
    });

    json config = args.point.to_json();
    config["command"] = "sweep";
    std::vector<std::string> alpha_names;
    for (const auto& a : alphas) alpha_names.push_back(a.to_string());
    config["alpha"] = alpha_names;
    config["l0"] = args.l0s;
    config["t"] = args.ts;
    config["methods"] = args.methods;
    deliver(args.output, render(table, config, kFormats.at(args.format)), out);
    return kSuccess;
}

int run_universal(const UniversalArgs& args, std::ostream& out) {
    const auto alphas = parse_alphas(args.alphas);
    if (alphas.empty()) throw DomainError("universal needs at least one alpha");
    std::vector<double> xs = args.xs;
    if (xs.empty()) {
        if (args.x_count < 1) throw DomainError("--x-count must be positive");
        if (!(args.x_min >= 0.0 && args.x_max >= args.x_min)) throw DomainError("need 0 <= x-min <= x-max");
        if (args.log_x && !(args.x_min > 0.0)) throw DomainError("--log-x needs x-min > 0");
        xs = args.log_x ? log_space(args.x_min, args.x_max, args.x_count) : lin_space(args.x_min, args.x_max, args.x_count);
    }
    struct Point {
        Exponent alpha;
        double x;
    };
    std::vector<Point> points;
    for (const auto& a : alphas)
        for (double x : xs) points.push_back({a, x});

    Table table;
    table.columns = {"alpha", "x", "b_tilde", "b_tilde_leading", "concurrence"};
    table.rows.resize(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const auto& [alpha, x] = points[i];
        const double bt = btilde_universal(x, alpha, kGamma, args.l0_star);
        table.rows[i] = {alpha.to_string(), io::format_double(x), io::format_double(bt),
                         io::format_double(btilde_leading(x, alpha)), io::format_double(concurrence(bt))};
    });

    json config;
    config["command"] = "universal";
    std::vector<std::string> alpha_names;
    for (const auto& a : alphas) alpha_names.push_back(a.to_string());
    config["alpha"] = alpha_names;
    config["x"] = xs;
    config["l0_star"] = args.l0_star;
    deliver(args.output, render(table, config, kFormats.at(args.format)), out);
    return kSuccess;
}

int run_concurrence(const ConcurrenceArgs& args, std::ostream& out) {
    if (args.b_tildes.empty() == args.concurrences.empty())
        throw DomainError("give exactly one of --b-tilde or --concurrence");
    Table table;
    table.columns = {"b_tilde", "concurrence"};
    for (double b : args.b_tildes) table.rows.push_back({io::format_double(b), io::format_double(concurrence(b))});
    for (double c : args.concurrences)
        table.rows.push_back({io::format_double(btilde_from_concurrence(c)), io::format_double(c)});

    json config;
    config["command"] = "concurrence";
    if (!args.b_tildes.empty()) config["b_tilde"] = args.b_tildes;
    if (!args.concurrences.empty()) config["concurrence"] = args.concurrences;
    if (kFormats.at(args.format) == Format::json && table.rows.size() == 1) {
        const double b = args.b_tildes.empty() ? btilde_from_concurrence(args.concurrences[0]) : args.b_tildes[0];
        const double c = args.b_tildes.empty() ? args.concurrences[0] : concurrence(b);
        json j{{"schema", kSchema}, {"config", config}, {"b_tilde", b}, {"concurrence", c}};
        deliver(args.output, j.dump(2) + "\n", out);
    } else {
        deliver(args.output, render(table, config, kFormats.at(args.format)), out);
    }
    return kSuccess;
}

int run_montecarlo(const MonteCarloArgs& args, std::ostream& out) {
    const Exponent alpha = Exponent::parse(args.alpha);
    if (!(args.t >= 0.0)) throw DomainError("t must be non-negative");
    const TurbulenceParams params = TurbulenceParams::from_strength(alpha, args.t);
    const MonteCarloOptions opt = mc_options(args.l0, params, args.point);
    const MonteCarloResult r = estimate_amplitudes(args.l0, params, args.point.samples, args.point.seed, opt);

    json config = args.point.to_json();
    config["command"] = "montecarlo";
    config["alpha"] = alpha.to_string();
    config["l0"] = args.l0;
    config["t"] = args.t;

    if (!args.separations.empty() || !args.structure_output.empty()) {
        if (args.t == 0.0) throw DomainError("structure functions need t > 0");
        if (args.separations.empty()) throw DomainError("--structure-output needs --separations");
        const ScreenGeometry g = opt.geometry.value_or(default_geometry(args.l0, params));
        std::vector<double> seps;
        for (double s : args.separations) seps.push_back(s * params.r0);
        const StructureAccumulator acc = sample_structure(params, g, seps, args.structure_screens, args.point.seed);
        const auto d = acc.structure_function();
        const auto c = acc.phase_factor();
        Table table;
        table.columns = {"separation", "d_mean", "d_std_err", "d_target", "phase_factor_mean", "phase_factor_std_err",
                         "phase_factor_target"};
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double target = structure_function(d[i].separation, params);
            table.rows.push_back({io::format_double(d[i].separation), io::format_double(d[i].mean),
                                  io::format_double(d[i].std_err), io::format_double(target),
                                  io::format_double(c[i].mean), io::format_double(c[i].std_err),
                                  io::format_double(std::exp(-0.5 * target))});
        }
        json sconfig = config;
        sconfig["separations_over_r0"] = args.separations;
        sconfig["structure_screens"] = args.structure_screens;
        sconfig["n"] = g.n;
        sconfig["extent"] = g.extent;
        deliver(args.structure_output, render_csv(table, sconfig.dump()), out);
    }
    if (!args.dump_screen.empty()) {
        const ScreenGeometry g = opt.geometry.value_or(default_geometry(args.l0, params));
        const PhaseScreen screen = ensemble_member(ScreenGenerator(params, g), args.point.seed, 0);
        write_screen(args.dump_screen, screen, args.screen_format == "csv" ? ScreenFormat::csv : ScreenFormat::binary);
    }

    json j = amplitude_json(alpha, args.l0, args.t, r.pair);
    j["samples"] = r.a.n_samples;
    if (kFormats.at(args.format) == Format::json) {
        j["schema"] = kSchema;
        j["config"] = config;
        deliver(args.output, j.dump(2) + "\n", out);
    } else {
        Table table{kAmplitudeColumns, {amplitude_cells(alpha, args.l0, args.t, r.pair)}};
        deliver(args.output, render_csv(table, config.dump()), out);
    }
    return kSuccess;
}

int run_figures(const FiguresArgs& args, std::ostream& out) {
    if (args.outdir.empty()) throw DomainError("figures needs --outdir");
    FigureOptions opt;
    if (!args.l0s.empty()) opt.l0_grid = args.l0s;
    if (!args.ts.empty()) opt.t_list = args.ts;
    std::vector<FigureId> ids;
    for (const auto& w : args.which) ids.push_back(parse_figure(w));
    // Compute everything first so a numerical failure leaves no files behind.
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    for (FigureId id : ids) {
        const Table table = figure_table(id, opt);
        files.emplace_back(std::filesystem::path(args.outdir) / ("fig" + std::string(to_string(id)) + ".csv"),
                           render_csv(table, figure_config(id, opt).dump()));
    }
    for (const auto& [path, content] : files) {
        io::write_file_atomic(path, content);
        out << path.string() << "\n";
    }
    return kSuccess;
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("no column " + std::string(name));
    return static_cast<std::size_t>(it - columns.begin());
}

std::string render_csv(const Table& table, const std::string& config_json) {
    std::string s;
    s += "# schema=";
    s += kSchema;
    s += "\n# config=" + config_json + "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) s += (c ? "," : "") + table.columns[c];
    s += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + row[c];
        s += "\n";
    }
    return s;
}

std::string_view to_string(FigureId id) {
    switch (id) {
    case FigureId::fig1a: return "1a";
    case FigureId::fig1b: return "1b";
    case FigureId::fig1c: return "1c";
    case FigureId::fig2: return "2";
    case FigureId::fig3: return "3";
    }
    return "?";
}

FigureId parse_figure(std::string_view text) {
    if (text.starts_with("fig")) text.remove_prefix(3);
    for (FigureId id : {FigureId::fig1a, FigureId::fig1b, FigureId::fig1c, FigureId::fig2, FigureId::fig3})
        if (text == to_string(id)) return id;
    throw DomainError("unknown figure '" + std::string(text) + "' (expected 1a, 1b, 1c, 2 or 3)");
}

Table figure_table(FigureId id, const FigureOptions& opt) {
    switch (id) {
    case FigureId::fig1a: return fig1_table(Exponent(1, 1), opt);
    case FigureId::fig1b: return fig1_table(Exponent(5, 3), opt);
    case FigureId::fig1c: return fig1_table(Exponent(2, 1), opt);
    case FigureId::fig2: return fig2_table(opt);
    case FigureId::fig3: return fig3_table(opt);
    }
    throw DomainError("unknown figure");
}

std::filesystem::path emit_figure_dataset(FigureId id, const std::filesystem::path& outdir, const FigureOptions& opt) {
    const Table table = figure_table(id, opt);
    const auto path = outdir / ("fig" + std::string(to_string(id)) + ".csv");
    io::write_file_atomic(path, render_csv(table, figure_config(id, opt).dump()));
    return path;
}

int execute_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"oamlab: OAM crosstalk and entanglement decay under turbulence", "oamlab"};
    app.require_subcommand(1);
    app.set_config("--config", "", "JSON file with flag values; explicit flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_version_flag("--version", "oamlab 0.1.0");

    const auto format_check = CLI::IsMember({"csv", "json"});
    const auto method_check = CLI::IsMember({"quadrature", "asymptotic", "series", "exact_quadratic", "montecarlo"});

    AmplitudesArgs amp;
    auto* c_amp = app.add_subcommand("amplitudes", "a, b and b_tilde at one (alpha, l0, t)");
    c_amp->add_option("--alpha", amp.alpha, "structure-function exponent, e.g. 5/3")->capture_default_str();
    c_amp->add_option("--l0", amp.l0, "azimuthal index")->required();
    c_amp->add_option("--t", amp.t, "turbulence strength w0/r0")->required();
    c_amp->add_option("--method", amp.method)->check(method_check)->capture_default_str();
    c_amp->add_option("--format", amp.format)->check(format_check)->capture_default_str();
    c_amp->add_option("--output,-o", amp.output, "output file (default: stdout)");
    add_point_options(c_amp, amp.point);

    SweepArgs sweep;
    auto* c_sweep = app.add_subcommand("sweep", "grid of (alpha, l0, t, method) points");
    c_sweep->add_option("--alpha", sweep.alphas)->delimiter(',');
    c_sweep->add_option("--l0", sweep.l0s)->delimiter(',')->required();
    c_sweep->add_option("--t", sweep.ts)->delimiter(',')->required();
    c_sweep->add_option("--methods", sweep.methods)->delimiter(',')->check(method_check);
    c_sweep->add_option("--format", sweep.format)->check(format_check)->capture_default_str();
    c_sweep->add_option("--output,-o", sweep.output);
    add_point_options(c_sweep, sweep.point);

    UniversalArgs uni;
    auto* c_uni = app.add_subcommand("universal", "universal b_tilde and concurrence versus x = xi/r0");
    c_uni->add_option("--alpha", uni.alphas)->delimiter(',');
    c_uni->add_option("--x", uni.xs, "explicit x values")->delimiter(',');
    c_uni->add_option("--x-min", uni.x_min)->capture_default_str();
    c_uni->add_option("--x-max", uni.x_max)->capture_default_str();
    c_uni->add_option("--x-count", uni.x_count)->capture_default_str();
    c_uni->add_flag("--log-x", uni.log_x, "log-spaced x grid");
    c_uni->add_option("--l0-star", uni.l0_star, "representative l0 for alpha = 5/3")->check(CLI::Range(10, 1'000'000));
    c_uni->add_option("--format", uni.format)->check(format_check)->capture_default_str();
    c_uni->add_option("--output,-o", uni.output);

    ConcurrenceArgs conc;
    auto* c_conc = app.add_subcommand("concurrence", "C from b_tilde, or b_tilde from C");
    c_conc->add_option("--b-tilde", conc.b_tildes)->delimiter(',');
    c_conc->add_option("--concurrence", conc.concurrences)->delimiter(',');
    c_conc->add_option("--format", conc.format)->check(format_check)->capture_default_str();
    c_conc->add_option("--output,-o", conc.output);

    MonteCarloArgs mc;
    auto* c_mc = app.add_subcommand("montecarlo", "phase-screen ensemble estimate of a and b");
    c_mc->add_option("--alpha", mc.alpha)->capture_default_str();
    c_mc->add_option("--l0", mc.l0)->required();
    c_mc->add_option("--t", mc.t)->required();
    c_mc->add_option("--format", mc.format)->check(format_check)->capture_default_str();
    c_mc->add_option("--output,-o", mc.output);
    c_mc->add_option("--separations", mc.separations, "structure-function separations in units of r0")
        ->delimiter(',');
    c_mc->add_option("--structure-screens", mc.structure_screens)->check(CLI::Range(2L, 10'000'000L));
    c_mc->add_option("--structure-output", mc.structure_output, "CSV file for the structure-function check");
    c_mc->add_option("--dump-screen", mc.dump_screen, "write the first screen of the ensemble");
    c_mc->add_option("--screen-format", mc.screen_format)->check(CLI::IsMember({"csv", "binary"}));
    add_point_options(c_mc, mc.point);

    FiguresArgs fig;
    auto* c_fig = app.add_subcommand("figures", "CSV datasets for figures 1a, 1b, 1c, 2 and 3");
    c_fig->add_option("--which", fig.which)->delimiter(',');
    c_fig->add_option("--outdir", fig.outdir)->required();
    c_fig->add_option("--l0", fig.l0s, "override the figure 1 l0 grid")->delimiter(',');
    c_fig->add_option("--t", fig.ts, "override the figure 1 t list")->delimiter(',');

    // Config items are attributed to the subcommand named on the command line.
    std::string section;
    for (const auto& a : args) {
        if (app.get_subcommand_no_throw(a) != nullptr) {
            section = a;
            break;
        }
    }
    app.config_formatter(std::make_shared<JsonConfig>(section));
    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (c_amp->parsed()) return run_amplitudes(amp, out);
        if (c_sweep->parsed()) return run_sweep(sweep, out);
        if (c_uni->parsed()) return run_universal(uni, out);
        if (c_conc->parsed()) return run_concurrence(conc, out);
        if (c_mc->parsed()) return run_montecarlo(mc, out);
        if (c_fig->parsed()) return run_figures(fig, out);
    } catch (const ConvergenceError& e) {
        err << "oamlab: convergence failure: " << e.what() << "\n";
        return kConvergenceError;
    } catch (const DomainError& e) {
        err << "oamlab: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "oamlab: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::runtime_error& e) {
        err << "oamlab: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

int execute_command(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return execute_command(args, std::cout, std::cerr);
}

}  // namespace oamlab::cli

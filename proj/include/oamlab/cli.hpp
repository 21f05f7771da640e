#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace oamlab::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kConvergenceError = 3 };

/// Runs one subcommand (amplitudes, sweep, universal, concurrence, montecarlo, figures).
/// `args` excludes the program name. Results go to the files named by --output /
/// --outdir, or to `out` when no file is given; diagnostics go to `err`.
int execute_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int execute_command(int argc, const char* const* argv);

/// Column-oriented table; cells are already formatted.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column; throws std::out_of_range if absent.
    std::size_t column(std::string_view name) const;
};

/// "# schema=oamlab.v1", "# config=<json>", the column row, then one line per row.
std::string render_csv(const Table& table, const std::string& config_json);

inline constexpr std::string_view kSchema = "oamlab.v1";

enum class FigureId { fig1a, fig1b, fig1c, fig2, fig3 };

std::string_view to_string(FigureId id);
/// Accepts "1a", "fig1a" and so on. Throws DomainError otherwise.
FigureId parse_figure(std::string_view text);

struct FigureOptions {
    std::vector<int> l0_grid{2, 3, 4, 5, 7, 10, 15, 20, 30, 50, 70, 100, 150, 200, 300};
    std::vector<double> t_list{0.1, 0.5, 1.0, 2.0, 5.0};
    int x_points_fig2 = 61;      ///< log-spaced on [1e-2, 10]
    int x_points_fig3 = 121;     ///< linear on [0, 1.2]
};

/// The dataset behind one figure, computed in full before anything is written.
Table figure_table(FigureId id, const FigureOptions& opt = {});

/// Writes <outdir>/fig<id>.csv atomically and returns its path.
std::filesystem::path emit_figure_dataset(FigureId id, const std::filesystem::path& outdir,
                                          const FigureOptions& opt = {});

}  // namespace oamlab::cli

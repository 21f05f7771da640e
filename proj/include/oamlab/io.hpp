#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace oamlab::io {

/// Shortest decimal string that round-trips to the same double ('.' separator,
/// no locale). Non-finite values print as nan, inf, -inf.
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it over `path`, so readers never
/// see a partial file. Parent directories are created as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace oamlab::io

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "tibpalm/linalg.hpp"

namespace tibpalm {

// Plain-text matrix format:
//
//   # optional comment lines anywhere
//   <rows> <cols>
//   v11 v12 ... (row-major, whitespace separated, any line breaks)
//
// Values are written with the shortest representation that round-trips
// exactly. Non-finite values are rejected on both read and write.

Matrix parse_matrix(std::string_view text);
std::string format_matrix(const Matrix& m);

Matrix load_matrix(const std::filesystem::path& path);
void save_matrix(const Matrix& m, const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace tibpalm

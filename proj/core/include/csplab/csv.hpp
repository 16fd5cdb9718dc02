#pragma once

#include <string>
#include <vector>

namespace csplab {

// Locale-independent decimal formatting via std::to_chars: shortest string
// that round-trips to the same double.
std::string format_double(double value);

// 17 significant digits, scientific; bit-exact reload for dumps.
std::string format_double_17(double value);

std::string join_csv(const std::vector<std::string>& fields);

// Writes lines joined with '\n' (trailing newline included); IoError names
// the path on failure.
void write_lines(const std::string& path, const std::vector<std::string>& lines);

std::vector<std::string> read_lines(const std::string& path);

}  // namespace csplab

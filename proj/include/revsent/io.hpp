#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace revsent::io {

// Whole-file helpers; failures raise IoError naming the path.
std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Shortest representation that round-trips exactly through parse_double.
std::string format_double(double value);
double parse_double(std::string_view s);

// Fixed-point rendering for human-readable tables.
std::string fixed(double value, int precision);

std::string trim(std::string_view s);

}  // namespace revsent::io

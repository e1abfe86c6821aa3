#pragma once

#include <string>
#include <vector>

namespace laguerre {

// 17 significant digits, classic "." decimal point, locale independent.
std::string format_double(double x);

// Writes content to path, replacing any existing file; throws Error on failure.
void write_file(const std::string& path, const std::string& content);

// "1,2.5,3" -> {1, 2.5, 3}; throws ConfigError on a malformed entry.
std::vector<double> parse_double_list(const std::string& s);

}  // namespace laguerre

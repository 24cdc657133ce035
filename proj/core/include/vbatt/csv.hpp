#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace vbatt::csv {

// Shortest decimal representation that round-trips exactly through
// double parsing (std::to_chars, fixed format).
std::string format_double(double value);

// Parsed CSV with a mandatory header row. Cells are kept as strings;
// numeric access validates and reports "<file>:<row>" on failure.
struct Table {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws if absent
    // row is 0-based into rows; error messages use 1-based file lines.
    double number(std::size_t row, std::size_t col) const;
};

// Reads a comma-separated file. Requires every row to have exactly as
// many cells as the header; ragged rows throw with the row number.
Table read_file(const std::string& path);

// Requires the header to be exactly `expected` (order included).
void require_header(const Table& table, const std::vector<std::string>& expected);

}  // namespace vbatt::csv

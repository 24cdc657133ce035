#include "vbatt/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace vbatt::csv {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
    if (ec != std::errc{}) throw std::runtime_error("format_double: value does not fit");
    return std::string(buf, ptr);
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::runtime_error(path + ": missing column '" + name + "'");
}

double Table::number(std::size_t row, std::size_t col) const {
    const std::string& cell = rows.at(row).at(col);
    double value{};
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    while (ptr != last && (*ptr == ' ' || *ptr == '\t' || *ptr == '\r')) ++ptr;
    if (ec != std::errc{} || ptr != last) {
        throw std::runtime_error(path + ":" + std::to_string(row + 2) +
                                 ": cannot parse '" + cell + "' as a number");
    }
    return value;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    Table table;
    table.path = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (lineno == 1) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected " + std::to_string(table.header.size()) +
                                     " cells, got " + std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) throw std::runtime_error(path + ": empty file");
    return table;
}

void require_header(const Table& table, const std::vector<std::string>& expected) {
    if (table.header != expected) {
        std::string want;
        for (const auto& h : expected) {
            if (!want.empty()) want += ',';
            want += h;
        }
        throw std::runtime_error(table.path + ": expected header '" + want + "'");
    }
}

}  // namespace vbatt::csv

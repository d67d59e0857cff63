#include "chemo/csv.hpp"

#include "chemo/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace chemo::csv {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_number(*value) : std::string{};
}

void write_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::span<const double>>& columns) {
    if (header.size() != columns.size()) throw ValidationError("csv: header/column count mismatch");
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns) {
        if (col.size() != rows) throw ValidationError("csv: ragged columns");
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format_number(columns[c][r]);
        os << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Table read_table(std::istream& is, const std::string& source_name) {
    Table table;
    std::string line;
    if (!std::getline(is, line)) throw ValidationError(source_name + ": empty csv");
    for (auto& h : split(line)) table.header.push_back(trim(h));
    table.columns.resize(table.header.size());

    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw ValidationError(source_name + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(table.header.size()) + " columns");
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string cell = trim(cells[c]);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw ValidationError(source_name + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
            }
            table.columns[c].push_back(v);
        }
    }
    return table;
}

Table read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open csv file: " + path);
    return read_table(in, path);
}

}  // namespace chemo::csv

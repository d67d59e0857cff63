#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chemo::csv {

/// "%.17g" rendering; the only number format used in data files.
std::string format_number(double value);

/// Optional numbers render as an empty cell when absent.
std::string format_optional(const std::optional<double>& value);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

void write_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::span<const double>>& columns);

/// Parses a numeric CSV with one header line. Throws ValidationError on malformed input.
Table read_table(std::istream& is, const std::string& source_name);
Table read_table_file(const std::string& path);

}  // namespace chemo::csv

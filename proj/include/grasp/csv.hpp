#pragma once

// Minimal RFC 4180 style CSV: header row, comma separator, optional double
// quotes, '.' decimal point. Numbers are written in the shortest form that
// reads back to the same double.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace grasp::csv {

struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws DataError if absent.
    std::size_t column(std::string_view name) const;
};

/// Parses CSV text. Every row must have as many fields as the header.
/// Errors carry the 1-based line and field.
Table parse(std::string_view text);
Table read_file(const std::string& path);

void write(std::ostream& out, const Table& table);
void write_file(const std::string& path, const Table& table);
std::string to_string(const Table& table);

std::string format_number(double value);
std::string format_count(std::size_t value);

/// Strict numeric cell parsing; `row` and `column` locate the cell in errors.
double parse_number(std::string_view cell, std::size_t row, std::size_t column);
std::size_t parse_count(std::string_view cell, std::size_t row, std::size_t column);

/// Checks the header matches `expected` exactly; throws DataError otherwise.
void require_header(const Table& table, const std::vector<std::string>& expected, std::string_view what);

} // namespace grasp::csv

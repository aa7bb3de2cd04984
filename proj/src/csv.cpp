#include <grasp/csv.hpp>
#include <grasp/error.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace grasp::csv {

std::size_t Table::column(std::string_view name) const
{
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == name) {
            return j;
        }
    }
    throw DataError("missing column '" + std::string(name) + "'");
}

namespace {

std::string location(std::size_t row, std::size_t column)
{
    return "row " + std::to_string(row) + ", column " + std::to_string(column);
}

// Splits one logical record starting at `pos`. Advances `line` by the number
// of physical lines consumed (quoted fields may span lines).
std::vector<std::string> parse_record(std::string_view text, std::size_t& pos, std::size_t& line)
{
    std::vector<std::string> fields;
    std::string field;
    const std::size_t start_line = line;
    bool quoted = false;
    bool was_quoted = false;
    while (pos < text.size()) {
        const char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field += '"';
                    pos += 2;
                    continue;
                }
                quoted = false;
                ++pos;
                continue;
            }
            if (c == '\n') {
                ++line;
            }
            field += c;
            ++pos;
            continue;
        }
        if (c == '"') {
            if (!field.empty() || was_quoted) {
                throw ParseError("stray quote at " + location(line, fields.size() + 1), line,
                                 fields.size() + 1);
            }
            quoted = true;
            was_quoted = true;
            ++pos;
            continue;
        }
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
            ++pos;
            continue;
        }
        if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
            ++pos;
            continue;
        }
        if (c == '\n') {
            ++pos;
            ++line;
            fields.push_back(std::move(field));
            return fields;
        }
        if (was_quoted) {
            throw ParseError("text after closing quote at " + location(line, fields.size() + 1), line,
                             fields.size() + 1);
        }
        field += c;
        ++pos;
    }
    if (quoted) {
        throw ParseError("unterminated quote starting on row " + std::to_string(start_line), start_line,
                         fields.size() + 1);
    }
    fields.push_back(std::move(field));
    ++line;
    return fields;
}

bool needs_quotes(const std::string& s)
{
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

} // namespace

Table parse(std::string_view text)
{
    Table t;
    std::size_t pos = 0;
    std::size_t line = 1;
    if (text.empty()) {
        throw ParseError("empty input: missing header row", 1, 1);
    }
    t.header = parse_record(text, pos, line);
    while (pos < text.size()) {
        const std::size_t row = line;
        std::vector<std::string> fields = parse_record(text, pos, line);
        if (fields.size() == 1 && fields[0].empty()) {
            continue;  // blank line
        }
        if (fields.size() != t.header.size()) {
            throw ParseError("expected " + std::to_string(t.header.size()) + " fields, found "
                                 + std::to_string(fields.size()) + " on row " + std::to_string(row),
                             row, std::min(fields.size(), t.header.size()) + 1);
        }
        t.rows.push_back(std::move(fields));
    }
    return t;
}

Table read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.row(), e.column());
    }
}

void write(std::ostream& out, const Table& table)
{
    auto emit = [&](const std::vector<std::string>& fields) {
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (j > 0) {
                out << ',';
            }
            if (needs_quotes(fields[j])) {
                out << '"';
                for (char c : fields[j]) {
                    if (c == '"') {
                        out << '"';
                    }
                    out << c;
                }
                out << '"';
            } else {
                out << fields[j];
            }
        }
        out << '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) {
        emit(row);
    }
}

void write_file(const std::string& path, const Table& table)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    write(out, table);
    if (!out) {
        throw DataError("write failed for '" + path + "'");
    }
}

std::string to_string(const Table& table)
{
    std::ostringstream out;
    write(out, table);
    return out.str();
}

std::string format_number(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

std::string format_count(std::size_t value)
{
    return std::to_string(value);
}

double parse_number(std::string_view cell, std::size_t row, std::size_t column)
{
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
        cell.remove_prefix(1);
    }
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) {
        cell.remove_suffix(1);
    }
    if (cell == "nan") {
        return std::nan("");
    }
    if (cell == "inf") {
        return INFINITY;
    }
    if (cell == "-inf") {
        return -INFINITY;
    }
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double value = 0.0;
    const auto result = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || result.ec != std::errc() || result.ptr != cell.data() + cell.size()) {
        throw ParseError("not a number: '" + std::string(cell) + "' at " + location(row, column), row, column);
    }
    return value;
}

std::size_t parse_count(std::string_view cell, std::size_t row, std::size_t column)
{
    std::size_t value = 0;
    const auto result = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || result.ec != std::errc() || result.ptr != cell.data() + cell.size()) {
        throw ParseError("not a count: '" + std::string(cell) + "' at " + location(row, column), row, column);
    }
    return value;
}

void require_header(const Table& table, const std::vector<std::string>& expected, std::string_view what)
{
    if (table.header != expected) {
        std::string want;
        for (const auto& h : expected) {
            want += (want.empty() ? "" : ",") + h;
        }
        throw DataError(std::string(what) + ": expected header " + want);
    }
}

} // namespace grasp::csv

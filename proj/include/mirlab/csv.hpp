#pragma once

// Comma-separated tables with a leading "# key=value ..." metadata line.
// Fields containing commas, quotes or newlines are double-quoted.

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mirlab {

struct CsvTable {
    std::map<std::string, std::string> meta;   // written as "# k1=v1 k2=v2"
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Throws SchemaMismatch when `name` is not a column.
    std::size_t column(const std::string& name) const;
    const std::string& at(std::size_t row, const std::string& name) const;
};

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

/// Throws ParseError on ragged rows or unterminated quotes.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Throws SchemaMismatch unless meta["schema"] == schema.
void expect_schema(const CsvTable& table, const std::string& schema);

/// Shortest text that parses back to the same double; "inf", "-inf", "nan".
std::string format_double(double value);
double parse_double(const std::string& text);

/// Empty optional is written as "Degenerate".
std::string format_optional(const std::optional<double>& value, const char* missing = "Degenerate");
std::optional<double> parse_optional(const std::string& text, const char* missing = "Degenerate");

} // namespace mirlab

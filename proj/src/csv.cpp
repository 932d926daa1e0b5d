#include "mirlab/csv.hpp"

#include "mirlab/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mirlab {

namespace {

std::string quoted(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Reads one logical record; returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
    fields.clear();
    std::string text;
    if (!std::getline(in, text)) return false;
    ++line;
    std::string field;
    bool quoting = false;
    for (std::size_t i = 0;; ++i) {
        if (i == text.size()) {
            if (!quoting) break;
            std::string more;
            if (!std::getline(in, more)) throw ParseError("unterminated quoted field", line);
            ++line;
            field += '\n';
            text = more;
            i = static_cast<std::size_t>(-1);
            continue;
        }
        const char c = text[i];
        if (quoting) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoting = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoting = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return true;
}

} // namespace

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
        if (header[k] == name) return k;
    throw SchemaMismatch("missing column '" + name + "'");
}

const std::string& CsvTable::at(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }

void write_csv(std::ostream& out, const CsvTable& table) {
    if (!table.meta.empty()) {
        out << "#";
        for (const auto& [key, value] : table.meta) out << " " << key << "=" << value;
        out << "\n";
    }
    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t k = 0; k < fields.size(); ++k) out << (k ? "," : "") << quoted(fields[k]);
        out << "\n";
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
}

void write_csv_file(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    write_csv(out, table);
    if (!out) throw Error("write failed for '" + path + "'");
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::vector<std::string> fields;
    std::size_t line = 0;
    bool have_header = false;
    while (in.peek() == '#') {
        std::string text;
        std::getline(in, text);
        ++line;
        std::istringstream words(text.substr(1));
        for (std::string word; words >> word;) {
            const auto eq = word.find('=');
            if (eq == std::string::npos) throw ParseError("metadata entry without '='", line);
            table.meta[word.substr(0, eq)] = word.substr(eq + 1);
        }
    }
    while (read_record(in, fields, line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (!have_header) {
            table.header = fields;
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            throw ParseError("expected " + std::to_string(table.header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             line);
        table.rows.push_back(fields);
    }
    if (!have_header) throw ParseError("missing header row", line + 1);
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_csv(in);
}

void expect_schema(const CsvTable& table, const std::string& schema) {
    const auto it = table.meta.find("schema");
    if (it == table.meta.end() || it->second != schema)
        throw SchemaMismatch("expected schema " + schema + ", found " +
                             (it == table.meta.end() ? std::string("none") : it->second));
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

double parse_double(const std::string& text) {
    if (text == "nan") return std::nan("");
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw SchemaMismatch("not a number: '" + text + "'");
    return value;
}

std::string format_optional(const std::optional<double>& value, const char* missing) {
    return value ? format_double(*value) : std::string(missing);
}

std::optional<double> parse_optional(const std::string& text, const char* missing) {
    if (text == missing) return std::nullopt;
    return parse_double(text);
}

} // namespace mirlab

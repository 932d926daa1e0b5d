#include "mirlab/mps.hpp"

#include "mirlab/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace mirlab {

namespace {

enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Bounds, End };

// Fields 1..6 of an MPS data line; index 0 is unused.
using Fields = std::array<std::string, 7>;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

std::string slice(const std::string& line, std::size_t first, std::size_t last) {
    if (line.size() < first) return {};
    return trim(std::string_view(line).substr(first - 1, last - first + 1));
}

Fields fixed_fields(const std::string& line) {
    Fields f;
    f[1] = slice(line, 2, 3);
    f[2] = slice(line, 5, 12);
    f[3] = slice(line, 15, 22);
    f[4] = slice(line, 25, 36);
    f[5] = slice(line, 40, 47);
    f[6] = slice(line, 50, 61);
    return f;
}

bool bound_takes_value(const std::string& type) {
    return type == "UP" || type == "LO" || type == "FX" || type == "LI" || type == "UI";
}

// Places free-format tokens into the fixed-format field positions.
Fields free_fields(Section section, const std::vector<std::string>& t, std::size_t line) {
    Fields f;
    auto put = [&](std::size_t from, std::size_t field) {
        for (std::size_t i = from; i < t.size(); ++i) f[field + i - from] = t[i];
    };
    switch (section) {
    case Section::Rows:
        if (t.size() != 2) throw ParseError("ROWS entries need a type and a name", line);
        f[1] = t[0];
        f[2] = t[1];
        break;
    case Section::Columns:
        if (t.size() == 3 && t[1] == "'MARKER'") {
            f[2] = t[0];
            f[3] = t[1];
            f[5] = t[2];
        } else {
            if (t.size() != 3 && t.size() != 5) throw ParseError("COLUMNS entries need 3 or 5 fields", line);
            put(0, 2);
        }
        break;
    case Section::Rhs:
        if (t.size() == 2 || t.size() == 4) put(0, 3);
        else if (t.size() == 3 || t.size() == 5) put(0, 2);
        else throw ParseError("RHS entries need 2 to 5 fields", line);
        break;
    case Section::Bounds: {
        if (t.empty()) throw ParseError("empty BOUNDS entry", line);
        f[1] = t[0];
        const std::size_t named = bound_takes_value(t[0]) ? 3 : 2;
        if (t.size() == named) put(1, 3);
        else if (t.size() == named + 1) put(1, 2);
        else throw ParseError("wrong number of fields for bound type " + t[0], line);
        break;
    }
    default: break;
    }
    return f;
}

double number(const std::string& text, std::size_t line) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ParseError("expected a number, found '" + text + "'", line);
    return value;
}

struct Builder {
    GeneralMip mip;
    std::string objective;
    std::unordered_map<std::string, Index> rows;
    std::unordered_map<std::string, Index> cols;
    std::vector<std::map<Index, double>> entries;  // per column
    std::vector<double> rhs;
    std::vector<double> cost, lower, upper;
    std::vector<std::size_t> free_line;            // line of an MI bound still in effect, 0 otherwise
    bool integer_block = false;

    Index column(const std::string& name, std::size_t line, bool create) {
        const auto it = cols.find(name);
        if (it != cols.end()) return it->second;
        if (!create) throw ParseError("unknown column '" + name + "'", line);
        const auto j = static_cast<Index>(mip.col_names.size());
        cols.emplace(name, j);
        mip.col_names.push_back(name);
        mip.integer.push_back(integer_block ? 1 : 0);
        entries.emplace_back();
        cost.push_back(0.0);
        lower.push_back(0.0);
        upper.push_back(kInf);
        free_line.push_back(0);
        return j;
    }

    // Row index, or -1 for the objective.
    Index row(const std::string& name, std::size_t line) const {
        if (name == objective) return -1;
        const auto it = rows.find(name);
        if (it == rows.end()) throw ParseError("unknown row '" + name + "'", line);
        return it->second;
    }

    void add_row(const std::string& type, const std::string& name, std::size_t line) {
        if (name.empty()) throw ParseError("row without a name", line);
        if (type == "N") {
            if (objective.empty()) objective = name;
            return;
        }
        RowSense sense;
        if (type == "L") sense = RowSense::Less;
        else if (type == "G") sense = RowSense::Greater;
        else if (type == "E") sense = RowSense::Equal;
        else throw ParseError("unknown row type '" + type + "'", line);
        if (rows.count(name) || name == objective) throw ParseError("duplicate row '" + name + "'", line);
        rows.emplace(name, static_cast<Index>(mip.row_names.size()));
        mip.row_names.push_back(name);
        mip.senses.push_back(sense);
        rhs.push_back(0.0);
    }

    void add_entry(Index j, const std::string& row_name, const std::string& value, std::size_t line) {
        const Index r = row(row_name, line);
        const double v = number(value, line);
        if (r < 0) cost[static_cast<std::size_t>(j)] = v;
        else entries[static_cast<std::size_t>(j)][r] = v;
    }

    void add_bound(const std::string& type, const std::string& col_name, const std::string& value, std::size_t line) {
        const auto j = static_cast<std::size_t>(column(col_name, line, false));
        const bool needs = bound_takes_value(type);
        if (needs && value.empty()) throw ParseError("bound " + type + " needs a value", line);
        const double v = needs ? number(value, line) : 0.0;
        if (type == "UP") {
            if (v < 0.0 && lower[j] == 0.0)
                throw UnsupportedFeature("line " + std::to_string(line) + ": negative upper bound on '" + col_name +
                                         "' implies a free lower bound");
            upper[j] = v;
        } else if (type == "LO") {
            lower[j] = v;
            free_line[j] = 0;
        } else if (type == "FX") {
            lower[j] = upper[j] = v;
            free_line[j] = 0;
        } else if (type == "BV") {
            mip.integer[j] = 1;
            lower[j] = 0.0;
            upper[j] = 1.0;
            free_line[j] = 0;
        } else if (type == "LI") {
            mip.integer[j] = 1;
            lower[j] = v;
            free_line[j] = 0;
        } else if (type == "UI") {
            mip.integer[j] = 1;
            upper[j] = v;
        } else if (type == "MI") {
            lower[j] = -kInf;
            free_line[j] = line;
        } else if (type == "PL") {
            upper[j] = kInf;
        } else if (type == "FR") {
            throw UnsupportedFeature("line " + std::to_string(line) + ": free column '" + col_name + "'");
        } else {
            throw ParseError("unknown bound type '" + type + "'", line);
        }
    }

    GeneralMip finish() {
        for (std::size_t j = 0; j < free_line.size(); ++j)
            if (free_line[j])
                throw UnsupportedFeature("line " + std::to_string(free_line[j]) + ": column '" + mip.col_names[j] +
                                         "' has no lower bound (MI without a later LO 0)");
        const auto m = static_cast<Index>(mip.row_names.size());
        const auto n = static_cast<Index>(mip.col_names.size());
        mip.coefficients = Matrix::Zero(m, n);
        for (Index j = 0; j < n; ++j)
            for (const auto& [r, v] : entries[static_cast<std::size_t>(j)]) mip.coefficients(r, j) = v;
        mip.rhs = Eigen::Map<const Vector>(rhs.data(), m);
        mip.cost = Eigen::Map<const Vector>(cost.data(), n);
        mip.lower = Eigen::Map<const Vector>(lower.data(), n);
        mip.upper = Eigen::Map<const Vector>(upper.data(), n);
        mip.validate();
        return std::move(mip);
    }
};

Section section_of(const std::string& keyword, std::size_t line) {
    if (keyword == "NAME") return Section::Name;
    if (keyword == "OBJSENSE" || keyword == "OBJSENS") return Section::ObjSense;
    if (keyword == "ROWS") return Section::Rows;
    if (keyword == "COLUMNS") return Section::Columns;
    if (keyword == "RHS") return Section::Rhs;
    if (keyword == "BOUNDS") return Section::Bounds;
    if (keyword == "ENDATA") return Section::End;
    if (keyword == "RANGES")
        throw UnsupportedFeature("line " + std::to_string(line) + ": RANGES section is not supported");
    throw ParseError("unknown section '" + keyword + "'", line);
}

bool parse_sense(const std::string& word, std::size_t line) {
    if (word == "MAX" || word == "MAXIMIZE") return true;
    if (word == "MIN" || word == "MINIMIZE") return false;
    throw ParseError("unknown objective sense '" + word + "'", line);
}

} // namespace

GeneralMip parse_mps(std::istream& in, MpsFormat format) {
    Builder b;
    Section section = Section::None;
    std::string rhs_set;
    std::string bound_set;
    std::string current_column;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '*') continue;

        if (line[0] != ' ' && line[0] != '\t') {
            const auto t = tokens(line);
            section = section_of(t[0], line_no);
            if (section == Section::Name) {
                b.mip.name = t.size() > 1 ? trim(std::string_view(line).substr(line.find(t[0]) + t[0].size())) : "";
            } else if (section == Section::ObjSense && t.size() > 1) {
                b.mip.maximize = parse_sense(t[1], line_no);
            } else if (section == Section::End) {
                if (b.objective.empty() && b.mip.row_names.empty() && b.mip.col_names.empty())
                    throw ParseError("ENDATA before any data", line_no);
                return b.finish();
            } else if (section == Section::Rhs) {
                rhs_set.clear();
            }
            continue;
        }

        const Fields f =
            format == MpsFormat::Fixed ? fixed_fields(line) : free_fields(section, tokens(line), line_no);
        switch (section) {
        case Section::ObjSense: b.mip.maximize = parse_sense(trim(line), line_no); break;
        case Section::Rows: b.add_row(f[1], f[2], line_no); break;
        case Section::Columns: {
            if (f[3] == "'MARKER'") {
                const std::string& kind = f[5].empty() ? f[4] : f[5];
                if (kind == "'INTORG'") b.integer_block = true;
                else if (kind == "'INTEND'") b.integer_block = false;
                else throw ParseError("unknown marker " + kind, line_no);
                break;
            }
            if (f[2].empty() || f[3].empty()) throw ParseError("COLUMNS entry without column or row", line_no);
            const bool fresh = !b.cols.count(f[2]);
            if (!fresh && f[2] != current_column)
                throw ParseError("entries of column '" + f[2] + "' are not contiguous", line_no);
            const Index j = b.column(f[2], line_no, true);
            current_column = f[2];
            b.add_entry(j, f[3], f[4], line_no);
            if (!f[5].empty()) b.add_entry(j, f[5], f[6], line_no);
            break;
        }
        case Section::Rhs: {
            if (rhs_set.empty()) rhs_set = f[2];
            else if (f[2] != rhs_set) break;  // only the first RHS set is used
            for (int k : {3, 5}) {
                if (f[static_cast<std::size_t>(k)].empty()) continue;
                const Index r = b.row(f[static_cast<std::size_t>(k)], line_no);
                const double v = number(f[static_cast<std::size_t>(k) + 1], line_no);
                if (r >= 0) b.rhs[static_cast<std::size_t>(r)] = v;
            }
            break;
        }
        case Section::Bounds: {
            if (bound_set.empty()) bound_set = f[2];
            else if (f[2] != bound_set) break;  // only the first BOUNDS set is used
            if (f[3].empty()) throw ParseError("bound without a column", line_no);
            b.add_bound(f[1], f[3], f[4], line_no);
            break;
        }
        case Section::None:
        case Section::Name: throw ParseError("data line outside any section", line_no);
        case Section::End: break;
        }
    }
    throw ParseError("missing ENDATA", line_no + 1);
}

GeneralMip read_mps(const std::string& path, MpsFormat format) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_mps(in, format);
}

std::string write_mps(const GeneralMip& mip) {
    mip.validate();
    std::ostringstream out;
    out.precision(17);
    auto row_name = [&](Index r) {
        return r < static_cast<Index>(mip.row_names.size()) ? mip.row_names[static_cast<std::size_t>(r)]
                                                            : "R" + std::to_string(r);
    };
    auto col_name = [&](Index j) {
        return j < static_cast<Index>(mip.col_names.size()) ? mip.col_names[static_cast<std::size_t>(j)]
                                                            : "C" + std::to_string(j);
    };
    auto check_name = [](const std::string& name) {
        if (name.empty() || std::any_of(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); }))
            throw UnsupportedFeature("name '" + name + "' cannot be written in free MPS format");
    };
    for (const auto& name : mip.row_names) check_name(name);
    for (const auto& name : mip.col_names) check_name(name);
    out << "NAME " << (mip.name.empty() ? "model" : mip.name) << "\n";
    if (mip.maximize) out << "OBJSENSE\n    MAX\n";
    out << "ROWS\n N  COST\n";
    for (Index r = 0; r < mip.num_rows(); ++r)
        out << " " << to_string(mip.senses[static_cast<std::size_t>(r)]) << "  " << row_name(r) << "\n";
    out << "COLUMNS\n";
    bool in_block = false;
    int markers = 0;
    for (Index j = 0; j < mip.num_cols(); ++j) {
        const bool integer = mip.integer[static_cast<std::size_t>(j)];
        if (integer != in_block) {
            out << "    M" << markers++ << " 'MARKER' " << (integer ? "'INTORG'" : "'INTEND'") << "\n";
            in_block = integer;
        }
        out << "    " << col_name(j) << " COST " << mip.cost(j) << "\n";
        for (Index r = 0; r < mip.num_rows(); ++r)
            if (mip.coefficients(r, j) != 0.0) out << "    " << col_name(j) << " " << row_name(r) << " " << mip.coefficients(r, j) << "\n";
    }
    if (in_block) out << "    M" << markers << " 'MARKER' 'INTEND'\n";
    out << "RHS\n";
    for (Index r = 0; r < mip.num_rows(); ++r)
        if (mip.rhs(r) != 0.0) out << "    RHS " << row_name(r) << " " << mip.rhs(r) << "\n";
    out << "BOUNDS\n";
    for (Index j = 0; j < mip.num_cols(); ++j) {
        if (mip.lower(j) == -kInf) out << " MI BND " << col_name(j) << "\n";
        else if (mip.lower(j) != 0.0) out << " LO BND " << col_name(j) << " " << mip.lower(j) << "\n";
        if (std::isfinite(mip.upper(j))) out << " UP BND " << col_name(j) << " " << mip.upper(j) << "\n";
    }
    out << "ENDATA\n";
    return out.str();
}

} // namespace mirlab

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dmiat {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class AttrKind { Continuous, Nominal };

/// Missing cells are stored as quiet NaN; nominal cells hold symbol codes.
inline bool is_missing(double v) { return std::isnan(v); }
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }

struct Attribute {
    std::string name;
    AttrKind kind = AttrKind::Continuous;
    std::vector<std::string> symbols;   // nominal only: code -> symbol, appearance order

    int symbol_code(std::string_view s) const {
        for (std::size_t i = 0; i < symbols.size(); ++i)
            if (symbols[i] == s) return static_cast<int>(i);
        return -1;
    }
};

struct ClassDistribution {
    std::vector<std::int64_t> counts;   // indexed by class code
    std::int64_t total = 0;
};

/// Columnar table: attribute columns plus one class-label column.
/// Immutable by convention once built; all algorithms take it by const ref.
struct Dataset {
    std::string name;                             // source stem, used in result tables
    std::vector<Attribute> attributes;
    std::vector<std::vector<double>> columns;     // [attr][row]
    std::vector<int> labels;                      // codes into class_domain
    std::vector<std::string> class_domain;        // first-appearance order
    std::string class_name = "class";

    std::size_t n_rows() const { return labels.size(); }
    std::size_t n_attributes() const { return attributes.size(); }
    double value(std::size_t row, std::size_t attr) const { return columns[attr][row]; }
    const std::string& label_symbol(std::size_t row) const { return class_domain[static_cast<std::size_t>(labels[row])]; }

    int class_code(std::string_view s) const {
        for (std::size_t i = 0; i < class_domain.size(); ++i)
            if (class_domain[i] == s) return static_cast<int>(i);
        return -1;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

inline bool parse_real(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) return false;
    return std::isfinite(out);
}

/// Shortest representation that round-trips exactly through parse_real.
inline std::string format_real(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

inline int intern_symbol(std::vector<std::string>& symbols, std::unordered_map<std::string, int>& index,
                         const std::string& s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    const int code = static_cast<int>(symbols.size());
    symbols.push_back(s);
    index.emplace(s, code);
    return code;
}

}   // namespace detail

enum class TableFormat { Csv, Keel };

/// CSV ingestion: header row, comma separator, '.' decimals, '?' missing,
/// class label in the last column. A column is continuous iff every
/// non-missing cell parses as a finite real.
inline Dataset parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty input: missing header row");
    const auto header = detail::split(line, ',');
    if (header.size() < 2) throw ParseError("header must contain at least one attribute and a class column");

    const std::size_t n_attrs = header.size() - 1;
    std::vector<std::vector<std::string>> cells(n_attrs);
    std::vector<std::string> label_text;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split(line, ',');
        if (fields.size() != header.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(fields.size()));
        if (fields.back().empty() || fields.back() == "?")
            throw ParseError("line " + std::to_string(line_no) + ": missing class label");
        for (std::size_t j = 0; j < n_attrs; ++j) cells[j].push_back(std::move(fields[j]));
        label_text.push_back(std::move(fields.back()));
    }
    if (label_text.empty()) throw ParseError("no data rows");

    Dataset ds;
    ds.class_name = header.back();
    const std::size_t n = label_text.size();

    for (std::size_t j = 0; j < n_attrs; ++j) {
        bool continuous = true;
        for (const auto& c : cells[j]) {
            double v;
            if (c != "?" && !detail::parse_real(c, v)) { continuous = false; break; }
        }
        Attribute attr;
        attr.name = header[j];
        attr.kind = continuous ? AttrKind::Continuous : AttrKind::Nominal;
        std::vector<double> col(n);
        if (continuous) {
            for (std::size_t i = 0; i < n; ++i) {
                if (cells[j][i] == "?") { col[i] = missing_value(); continue; }
                detail::parse_real(cells[j][i], col[i]);
            }
        } else {
            std::unordered_map<std::string, int> index;
            for (std::size_t i = 0; i < n; ++i) {
                if (cells[j][i] == "?") { col[i] = missing_value(); continue; }
                col[i] = detail::intern_symbol(attr.symbols, index, cells[j][i]);
            }
        }
        ds.attributes.push_back(std::move(attr));
        ds.columns.push_back(std::move(col));
    }

    std::unordered_map<std::string, int> class_index;
    ds.labels.reserve(n);
    for (const auto& s : label_text)
        ds.labels.push_back(detail::intern_symbol(ds.class_domain, class_index, s));
    if (ds.class_domain.size() < 2) throw ParseError("class column has fewer than 2 distinct labels");
    return ds;
}

/// KEEL-style .dat ingestion: @relation / @attribute / optional @inputs,
/// @outputs / @data. Attribute kinds come from the header; the class is the
/// @outputs attribute, or the last one when @outputs is absent.
inline Dataset parse_keel(std::istream& in) {
    struct Decl { std::string name; AttrKind kind; std::vector<std::string> symbols; };
    std::vector<Decl> decls;
    std::string output_name;
    std::string line;
    std::size_t line_no = 0;
    bool in_data = false;
    std::vector<std::vector<std::string>> raw_rows;

    while (std::getline(in, line)) {
        ++line_no;
        auto t = detail::trim(line);
        if (t.empty()) continue;
        if (!in_data && (t[0] == '@')) {
            std::string lower(t.substr(0, t.find_first_of(" \t")));
            std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
            if (lower == "@data") { in_data = true; continue; }
            if (lower == "@relation" || lower == "@inputs") continue;
            if (lower == "@outputs") {
                output_name = detail::trim(t.substr(8));
                continue;
            }
            if (lower == "@attribute") {
                auto rest = detail::trim(t.substr(10));
                Decl d;
                std::size_t name_end = rest.find_first_of(" \t{");
                if (name_end == std::string_view::npos)
                    throw ParseError("line " + std::to_string(line_no) + ": malformed @attribute");
                d.name = std::string(rest.substr(0, name_end));
                auto spec = detail::trim(rest.substr(name_end));
                if (!spec.empty() && spec[0] == '{') {
                    auto close = spec.find('}');
                    if (close == std::string_view::npos)
                        throw ParseError("line " + std::to_string(line_no) + ": unterminated symbol set");
                    d.kind = AttrKind::Nominal;
                    d.symbols = detail::split(spec.substr(1, close - 1), ',');
                } else {
                    d.kind = AttrKind::Continuous;   // real/integer ranges all map to continuous
                }
                decls.push_back(std::move(d));
                continue;
            }
            throw ParseError("line " + std::to_string(line_no) + ": unknown header directive");
        }
        if (!in_data) throw ParseError("line " + std::to_string(line_no) + ": data before @data");
        auto fields = detail::split(t, ',');
        if (fields.size() != decls.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(decls.size()) +
                             " fields, got " + std::to_string(fields.size()));
        raw_rows.push_back(std::move(fields));
    }
    if (decls.empty()) throw ParseError("no @attribute declarations");
    if (raw_rows.empty()) throw ParseError("no data rows");

    std::size_t class_idx = decls.size() - 1;
    if (!output_name.empty()) {
        bool found = false;
        for (std::size_t j = 0; j < decls.size(); ++j)
            if (decls[j].name == output_name) { class_idx = j; found = true; break; }
        if (!found) throw ParseError("@outputs names unknown attribute '" + output_name + "'");
    }

    Dataset ds;
    ds.class_name = decls[class_idx].name;
    const std::size_t n = raw_rows.size();

    for (std::size_t j = 0; j < decls.size(); ++j) {
        if (j == class_idx) continue;
        Attribute attr;
        attr.name = decls[j].name;
        attr.kind = decls[j].kind;
        attr.symbols = decls[j].symbols;
        std::vector<double> col(n);
        std::unordered_map<std::string, int> index;
        for (std::size_t i = 0; i < attr.symbols.size(); ++i) index.emplace(attr.symbols[i], static_cast<int>(i));
        for (std::size_t i = 0; i < n; ++i) {
            const auto& cell = raw_rows[i][j];
            if (cell == "?") { col[i] = missing_value(); continue; }
            if (attr.kind == AttrKind::Continuous) {
                if (!detail::parse_real(cell, col[i]))
                    throw ParseError("unparseable value '" + cell + "' in attribute " + attr.name);
            } else {
                col[i] = detail::intern_symbol(attr.symbols, index, cell);
            }
        }
        ds.attributes.push_back(std::move(attr));
        ds.columns.push_back(std::move(col));
    }

    // Class domain: declared order first, then any undeclared labels by appearance.
    std::unordered_map<std::string, int> class_index;
    for (const auto& s : decls[class_idx].symbols) detail::intern_symbol(ds.class_domain, class_index, s);
    ds.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& cell = raw_rows[i][class_idx];
        if (cell == "?") throw ParseError("missing class label in data row " + std::to_string(i + 1));
        ds.labels.push_back(detail::intern_symbol(ds.class_domain, class_index, cell));
    }
    // Drop declared-but-unused trailing symbols? Keep them: the declaration is part of the schema.
    if (ds.class_domain.size() < 2) throw ParseError("class attribute has fewer than 2 distinct labels");
    return ds;
}

inline Dataset parse_table(std::istream& in, TableFormat format) {
    return format == TableFormat::Csv ? parse_csv(in) : parse_keel(in);
}

/// Loads a table by extension: ".dat" parses as KEEL, anything else as CSV.
inline Dataset load_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    Dataset ds = parse_table(in, path.extension() == ".dat" ? TableFormat::Keel : TableFormat::Csv);
    ds.name = path.stem().string();
    return ds;
}

inline void write_csv(const Dataset& ds, std::ostream& out) {
    for (const auto& a : ds.attributes) out << a.name << ',';
    out << ds.class_name << '\n';
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        for (std::size_t j = 0; j < ds.n_attributes(); ++j) {
            const double v = ds.columns[j][i];
            if (is_missing(v)) out << '?';
            else if (ds.attributes[j].kind == AttrKind::Nominal)
                out << ds.attributes[j].symbols[static_cast<std::size_t>(v)];
            else out << detail::format_real(v);
            out << ',';
        }
        out << ds.label_symbol(i) << '\n';
    }
}

inline ClassDistribution class_counts(const Dataset& ds, std::span<const std::size_t> rows) {
    ClassDistribution dist;
    dist.counts.assign(ds.class_domain.size(), 0);
    for (auto r : rows) {
        ++dist.counts[static_cast<std::size_t>(ds.labels[r])];
        ++dist.total;
    }
    return dist;
}

struct SortedColumn {
    std::vector<std::size_t> order;     // rows with known values, values non-decreasing, ties by row index
    std::vector<std::size_t> missing;   // rows excluded for a missing value
};

/// Stable value order of a continuous column over the given rows.
inline SortedColumn sorted_order(const Dataset& ds, std::size_t attr, std::span<const std::size_t> rows) {
    if (ds.attributes[attr].kind != AttrKind::Continuous)
        throw std::invalid_argument("sorted_order: attribute '" + ds.attributes[attr].name + "' is nominal");
    SortedColumn sc;
    sc.order.reserve(rows.size());
    const auto& col = ds.columns[attr];
    for (auto r : rows) {
        if (is_missing(col[r])) sc.missing.push_back(r);
        else sc.order.push_back(r);
    }
    std::sort(sc.order.begin(), sc.order.end(), [&](std::size_t a, std::size_t b) {
        if (col[a] != col[b]) return col[a] < col[b];
        return a < b;
    });
    std::sort(sc.missing.begin(), sc.missing.end());
    return sc;
}

/// Structural equality with NaN-aware cell comparison (missing == missing).
inline bool datasets_equal(const Dataset& a, const Dataset& b) {
    if (a.class_name != b.class_name || a.class_domain != b.class_domain || a.labels != b.labels) return false;
    if (a.attributes.size() != b.attributes.size()) return false;
    for (std::size_t j = 0; j < a.attributes.size(); ++j) {
        const auto& x = a.attributes[j];
        const auto& y = b.attributes[j];
        if (x.name != y.name || x.kind != y.kind || x.symbols != y.symbols) return false;
        if (a.columns[j].size() != b.columns[j].size()) return false;
        for (std::size_t i = 0; i < a.columns[j].size(); ++i) {
            const double u = a.columns[j][i];
            const double v = b.columns[j][i];
            if (is_missing(u) != is_missing(v)) return false;
            if (!is_missing(u) && u != v) return false;
        }
    }
    return true;
}

inline std::vector<std::size_t> all_rows(const Dataset& ds) {
    std::vector<std::size_t> rows(ds.n_rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return rows;
}

}   // namespace dmiat

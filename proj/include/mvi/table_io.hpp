#pragma once

// Flat result rows and their CSV / JSON serialization. Numbers are written
// with 17 significant digits so that every double survives a round trip.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvi/errors.hpp"

namespace mvi {

using Cell = std::variant<double, std::string>;

struct Row {
    std::vector<std::pair<std::string, Cell>> cells;

    Row& add(std::string name, Cell value) {
        for (auto& [n, v] : cells) {
            if (n == name) { v = std::move(value); return *this; }
        }
        cells.emplace_back(std::move(name), std::move(value));
        return *this;
    }

    template <class T>
        requires std::is_arithmetic_v<T>
    Row& add(std::string name, T value) {
        return add(std::move(name), Cell{static_cast<double>(value)});
    }

    Row& add(std::string name, const char* value) { return add(std::move(name), Cell{std::string(value)}); }

    const Cell* find(std::string_view name) const {
        for (const auto& [n, v] : cells)
            if (n == name) return &v;
        return nullptr;
    }

    double number(std::string_view name) const {
        const Cell* c = find(name);
        if (!c || !std::holds_alternative<double>(*c))
            throw NotFoundError("row has no numeric column '" + std::string(name) + "'");
        return std::get<double>(*c);
    }

    std::string text(std::string_view name) const {
        const Cell* c = find(name);
        if (!c || !std::holds_alternative<std::string>(*c))
            throw NotFoundError("row has no text column '" + std::string(name) + "'");
        return std::get<std::string>(*c);
    }
};

enum class Format { csv, json };

inline Format parse_format(std::string_view token) {
    if (token == "csv") return Format::csv;
    if (token == "json") return Format::json;
    throw UsageError("unknown output format '" + std::string(token) + "' (expected csv or json)");
}

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Column names in first-appearance order across all rows.
inline std::vector<std::string> column_union(const std::vector<Row>& rows) {
    std::vector<std::string> cols;
    for (const auto& r : rows)
        for (const auto& [n, v] : r.cells)
            if (std::find(cols.begin(), cols.end(), n) == cols.end()) cols.push_back(n);
    return cols;
}

namespace detail {

inline std::string csv_field(std::string_view s) {
    const bool quote = s.find_first_of(",\"\r\n") != std::string_view::npos ||
                       (!s.empty() && (s.front() == ' ' || s.back() == ' '));
    if (!quote) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string cell_text(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) return format_number(*d);
    return std::get<std::string>(c);
}

/// Converts a field to a number when the whole text parses as one.
inline Cell guess_cell(const std::string& text) {
    if (text.empty()) return text;
    if (text == "nan") return std::nan("");
    if (text == "inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin + text.size() && !std::isspace(static_cast<unsigned char>(text.front())))
        return v;
    return text;
}

} // namespace detail

/// RFC-4180: header line, CRLF record separators, quoted fields as needed.
/// Cells a row does not have are left empty.
inline void write_csv(const std::vector<Row>& rows, std::ostream& os) {
    const auto cols = column_union(rows);
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << detail::csv_field(cols[i]);
    os << "\r\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) os << ',';
            if (const Cell* c = r.find(cols[i])) os << detail::csv_field(detail::cell_text(*c));
        }
        os << "\r\n";
    }
}

/// Array of flat objects; non-finite numbers become null.
inline void write_json(const std::vector<Row>& rows, std::ostream& os) {
    os << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        os << (i ? ",\n  {" : "\n  {");
        const auto& cells = rows[i].cells;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j) os << ", ";
            os << nlohmann::json(cells[j].first).dump() << ": ";
            if (const double* d = std::get_if<double>(&cells[j].second))
                os << (std::isfinite(*d) ? format_number(*d) : "null");
            else
                os << nlohmann::json(std::get<std::string>(cells[j].second)).dump();
        }
        os << "}";
    }
    os << (rows.empty() ? "]\n" : "\n]\n");
}

inline void emit(const std::vector<Row>& rows, Format format, std::ostream& os) {
    if (format == Format::csv) write_csv(rows, os);
    else write_json(rows, os);
}

inline void emit(const std::vector<Row>& rows, Format format, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    emit(rows, format, os);
    os.flush();
    if (!os) throw IoError("write to '" + path + "' failed");
}

/// Splits RFC-4180 text into records. Lines starting with '#' outside a
/// quoted field are skipped when `allow_comments` is set.
inline std::vector<std::vector<std::string>> parse_csv_records(std::istream& is,
                                                               bool allow_comments = false) {
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> rec;
    std::string field;
    bool in_quotes = false, at_record_start = true, field_started = false;

    auto end_record = [&] {
        rec.push_back(std::move(field));
        field.clear();
        records.push_back(std::move(rec));
        rec.clear();
        at_record_start = true;
        field_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') { field += '"'; ++i; }
                else in_quotes = false;
            } else {
                field += c;
            }
            continue;
        }
        if (at_record_start && allow_comments && c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (at_record_start && (c == '\n' || c == '\r')) continue; // blank line
        at_record_start = false;
        switch (c) {
        case '"':
            if (field_started && !field.empty())
                throw ValidationError("csv", "quote inside unquoted field");
            in_quotes = true;
            field_started = true;
            break;
        case ',':
            rec.push_back(std::move(field));
            field.clear();
            field_started = false;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_record();
            break;
        case '\n':
            end_record();
            break;
        default:
            field += c;
            field_started = true;
        }
    }
    if (in_quotes) throw ValidationError("csv", "unterminated quoted field");
    if (!at_record_start) end_record();
    return records;
}

/// Inverse of write_csv. Empty fields are dropped from the row.
inline std::vector<Row> read_csv(std::istream& is) {
    auto records = parse_csv_records(is);
    std::vector<Row> rows;
    if (records.empty()) return rows;
    const auto& header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != header.size())
            throw ValidationError("csv", "record " + std::to_string(r) + " has " +
                                             std::to_string(records[r].size()) + " fields, header has " +
                                             std::to_string(header.size()));
        Row row;
        for (std::size_t c = 0; c < header.size(); ++c)
            if (!records[r][c].empty()) row.add(header[c], detail::guess_cell(records[r][c]));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<Row> read_json(std::istream& is) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("json", e.what());
    }
    if (!doc.is_array()) throw ValidationError("json", "expected an array of objects");
    std::vector<Row> rows;
    for (const auto& obj : doc) {
        if (!obj.is_object()) throw ValidationError("json", "expected an array of objects");
        Row row;
        for (const auto& [k, v] : obj.items()) {
            if (v.is_number()) row.add(k, v.get<double>());
            else if (v.is_string()) row.add(k, v.get<std::string>());
            else if (v.is_null()) row.add(k, std::nan(""));
            else throw ValidationError("json", "field '" + k + "' is not flat");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace mvi

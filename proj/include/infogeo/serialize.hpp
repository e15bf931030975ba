// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "infogeo/distribution.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/grid.hpp"
#include "infogeo/payoff.hpp"

namespace infogeo {

/// Fixed 17-significant-digit rendering so identical inputs produce
/// byte-identical artifacts.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Minimal JSON value with insertion-ordered objects and deterministic
/// number formatting. Output only; scenario parsing uses a full parser.
class JsonValue {
public:
    static JsonValue object() { return JsonValue(Object{}); }
    static JsonValue array() { return JsonValue(Array{}); }
    static JsonValue str(std::string s) { return JsonValue(std::move(s)); }
    static JsonValue num(double v) { return JsonValue(v); }
    static JsonValue integer(long long v) { return JsonValue(v); }
    static JsonValue boolean(bool v) { return JsonValue(v); }

    JsonValue& set(const std::string& key, JsonValue v) {
        std::get<Object>(data_).emplace_back(key, std::move(v));
        return *this;
    }

    JsonValue& push(JsonValue v) {
        std::get<Array>(data_).push_back(std::move(v));
        return *this;
    }

    std::string dump(int indent = 2) const {
        std::string out;
        write(out, indent, 0);
        out.push_back('\n');
        return out;
    }

private:
    struct Object;
    struct Array;
    using Data = std::variant<double, long long, bool, std::string, Object, Array>;
    struct Object : std::vector<std::pair<std::string, JsonValue>> {};
    struct Array : std::vector<JsonValue> {};

    explicit JsonValue(Data d) : data_(std::move(d)) {}

    static void escape(std::string& out, const std::string& s) {
        out.push_back('"');
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out += buf;
                    } else {
                        out.push_back(c);
                    }
            }
        }
        out.push_back('"');
    }

    void write(std::string& out, int indent, int depth) const {
        const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
        const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
        if (const auto* d = std::get_if<double>(&data_)) {
            out += format_double(*d);
        } else if (const auto* i = std::get_if<long long>(&data_)) {
            out += std::to_string(*i);
        } else if (const auto* b = std::get_if<bool>(&data_)) {
            out += *b ? "true" : "false";
        } else if (const auto* s = std::get_if<std::string>(&data_)) {
            escape(out, *s);
        } else if (const auto* o = std::get_if<Object>(&data_)) {
            if (o->empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            for (std::size_t k = 0; k < o->size(); ++k) {
                out += pad_in;
                escape(out, (*o)[k].first);
                out += ": ";
                (*o)[k].second.write(out, indent, depth + 1);
                if (k + 1 < o->size()) out += ",";
                out += "\n";
            }
            out += pad + "}";
        } else if (const auto* a = std::get_if<Array>(&data_)) {
            if (a->empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t k = 0; k < a->size(); ++k) {
                out += pad_in;
                (*a)[k].write(out, indent, depth + 1);
                if (k + 1 < a->size()) out += ",";
                out += "\n";
            }
            out += pad + "]";
        }
    }

    Data data_;
};

// ---------------------------------------------------------------------------
// CSV I/O. Column order is fixed (x first), values at 17 significant digits.
// ---------------------------------------------------------------------------

inline void write_series_csv(const std::string& path, const Grid& grid,
                             const std::vector<std::pair<std::string, const std::vector<double>*>>&
                                 columns) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidRange("write_series_csv: cannot open " + path);
    out << "x";
    for (const auto& [name, _] : columns) out << "," << name;
    out << "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_double(grid.point(i));
        for (const auto& [_, col] : columns) out << "," << format_double((*col)[i]);
        out << "\n";
    }
}

inline void write_payoff_csv(const std::string& path, const Payoff& payoff) {
    write_series_csv(path, payoff.grid(), {{"value", &payoff.values()}});
}

inline void write_distribution_csv(const std::string& path, const Distribution& dist) {
    write_series_csv(path, dist.grid(), {{"density", &dist.density()}});
}

/// Geodesic trace rows: t first, then one density column per grid node.
inline void write_trace_csv(const std::string& path, const std::vector<double>& ts,
                            const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidRange("write_trace_csv: cannot open " + path);
    out << "t";
    if (!rows.empty())
        for (std::size_t j = 0; j < rows.front().size(); ++j) out << ",d" << j;
    out << "\n";
    for (std::size_t k = 0; k < ts.size(); ++k) {
        out << format_double(ts[k]);
        for (double v : rows[k]) out << "," << format_double(v);
        out << "\n";
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

/// Reads a two-column (x,value) CSV and checks the x column against the
/// expected grid.
inline std::vector<double> read_column_csv(const std::string& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw InvalidRange("read_column_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw InvalidRange("read_column_csv: empty file " + path);
    std::vector<double> values;
    values.reserve(grid.size());
    std::size_t i = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() < 2) throw InvalidRange("read_column_csv: malformed row in " + path);
        const double x = std::stod(cells[0]);
        if (i >= grid.size() || std::abs(x - grid.point(i)) > 1e-9 * (1.0 + std::abs(x)))
            throw GridMismatch("read_column_csv: x column does not match the scenario grid");
        values.push_back(std::stod(cells[1]));
        ++i;
    }
    if (i != grid.size())
        throw GridMismatch("read_column_csv: row count does not match the scenario grid");
    return values;
}

}  // namespace infogeo

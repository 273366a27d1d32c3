#pragma once
//
// Tabular reports and their CSV / JSON serializations. Column order is
// fixed by the producer; floats are written with 17 significant digits so
// both formats round-trip to the same doubles.
//

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace bessel_ccf {

using Cell = std::variant<long, double, std::string>;

struct Report {
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::map<std::string, Cell> meta;
    bool passed = true;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw domain_error("Report: row width does not match the header");
        rows.push_back(std::move(row));
    }
};

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_cell(const Cell& c) {
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    return std::get<std::string>(c);
}

inline void write_csv(const Report& r, std::ostream& os) {
    for (size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
        os << '\n';
    }
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
    if (const auto* l = std::get_if<long>(&c)) return *l;
    if (const auto* d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return format_double(*d);
        return *d;
    }
    return std::get<std::string>(c);
}

inline nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["kind"] = r.kind;
    j["passed"] = r.passed;
    j["columns"] = r.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json o;
        for (size_t i = 0; i < row.size(); ++i) o[r.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(o));
    }
    j["rows"] = std::move(rows);
    auto meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.meta) meta[k] = cell_json(v);
    j["meta"] = std::move(meta);
    return j;
}

inline void write_json(const Report& r, std::ostream& os) { os << to_json(r).dump(2) << '\n'; }

inline void write_report(const Report& r, const std::string& format, std::ostream& os) {
    if (format == "csv")
        write_csv(r, os);
    else if (format == "json")
        write_json(r, os);
    else
        throw usage_error("--format: expected csv or json, got '" + format + "'");
}

/// Writes to `destination`, or to stdout when it is empty or "-".
inline void emit_report(const Report& r, const std::string& format, const std::string& destination) {
    if (destination.empty() || destination == "-") {
        write_report(r, format, std::cout);
        std::cout.flush();
        return;
    }
    std::ostringstream buf;
    write_report(r, format, buf);
    std::ofstream f(destination, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("cannot open '" + destination + "' for writing");
    f << buf.str();
    if (!f) throw io_error("write to '" + destination + "' failed");
}

}  // namespace bessel_ccf

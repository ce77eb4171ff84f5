#include "report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>

namespace resetfpt::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

double round12(double v) {
    if (!std::isfinite(v)) return v;
    const std::string s = format_number(v);
    return std::strtod(s.c_str(), nullptr);
}

namespace {

std::string csv_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) {
                if (ch == '"') q += '"';
                q += ch;
            }
            return q + "\"";
        }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::json json_cell(const Cell& c) {
    struct Visitor {
        nlohmann::json operator()(std::monostate) const { return nullptr; }
        nlohmann::json operator()(double v) const {
            if (std::isnan(v)) return nullptr;
            if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
            return round12(v);
        }
        nlohmann::json operator()(long long v) const { return v; }
        nlohmann::json operator()(bool v) const { return v; }
        nlohmann::json operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, c);
}

}  // namespace

void write_csv(const Report& report, std::ostream& out) {
    for (const auto& [k, v] : report.meta) out << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
        out << (i ? "," : "") << report.columns[i];
    }
    out << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
}

void write_json(const Report& report, std::ostream& out) {
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : report.meta) meta[k] = v;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size() && i < report.columns.size(); ++i) {
            obj[report.columns[i]] = json_cell(row[i]);
        }
        rows.push_back(std::move(obj));
    }
    nlohmann::json doc = {{"meta", std::move(meta)}, {"rows", std::move(rows)}};
    out << doc.dump(2) << '\n';
}

}  // namespace resetfpt::cli

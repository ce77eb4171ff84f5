#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace resetfpt::cli {

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

/// Tabular command output: metadata pairs, then named columns.
struct Report {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_meta(std::string key, std::string value) {
        meta.emplace_back(std::move(key), std::move(value));
    }
};

/// %.12g-style: at most 12 significant digits, trailing zeros dropped;
/// "inf" / "-inf" / "nan" for non-finite values.
std::string format_number(double v);

/// `v` rounded to 12 significant digits.
double round12(double v);

void write_csv(const Report& report, std::ostream& out);

/// {"meta": {...}, "rows": [{column: value, ...}, ...]} with sorted keys.
void write_json(const Report& report, std::ostream& out);

}  // namespace resetfpt::cli

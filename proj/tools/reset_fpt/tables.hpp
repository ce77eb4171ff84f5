#pragma once

#include "report.hpp"

#include <resetfpt/models.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace resetfpt::cli {

/// Reference values for one row; NaN where none is stated.
struct RefRow {
    double x;
    double r_m;
    double m;
    double t0;
};

struct TablePanel {
    std::string label;
    ProblemSpec family;
    /// When set, each row uses x_r = x; otherwise family.x_r is fixed.
    bool reset_at_start = false;
    std::vector<RefRow> rows;
};

struct TableDef {
    std::string name;
    std::string description;
    std::vector<TablePanel> panels;
};

const std::vector<TableDef>& table_catalog();
const TableDef* find_table(std::string_view name);

/// Recomputes every row of `table` and lays it out next to the reference values.
Report build_table(const TableDef& table);

/// |computed - ref| / |ref|; 0 when both are equal (including both infinite);
/// NaN when ref is missing, zero or infinite.
double relative_difference(double computed, double ref);

}  // namespace resetfpt::cli

#include "tables.hpp"

#include <resetfpt/optimize.hpp>
#include <resetfpt/parallel.hpp>

#include <cmath>
#include <limits>

namespace resetfpt::cli {

namespace {

constexpr double kNa = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

ProblemSpec fpt(ModelSpec model, double x_r = 1.0) {
    return {ProblemKind::Fpt, x_r, x_r, kInf, std::move(model)};
}

ProblemSpec fet(ModelSpec model, double x_r, double b = 1.0) {
    return {ProblemKind::Fet, x_r, x_r, b, std::move(model)};
}

std::vector<TableDef> make_catalog() {
    std::vector<TableDef> c;

    c.push_back({"tab1",
                 "Brownian motion, first passage through 0, x_r = x",
                 {{"eta=0", fpt(DriftedBM{0.0}), true,
                   {{0.1, 126.980, 0.030, kNa},
                    {0.5, 5.079, 0.772, kNa},
                    {1, 1.269, 3.088, kNa},
                    {2, 0.317, 12.353, kNa},
                    {3, 0.141, 27.79, kNa},
                    {5, 0.050, 77.206, kNa},
                    {10, 0.012, 308.827, kNa}}}}});

    c.push_back({"tab2",
                 "Brownian motion, first passage through 0, x_r = 1",
                 {{"eta=0", fpt(DriftedBM{0.0}), false,
                   {{0.0001, 0.5000, 0.00054, kNa},
                    {0.001, 0.5005, 0.05430, kNa},
                    {0.01, 0.5050, 0.05409, kNa},
                    {0.1, 0.5529, 0.51671, kNa},
                    {0.3, 0.6780, 1.39345, kNa},
                    {0.5, 0.8289, 2.07535, kNa},
                    {0.9, 1.1812, 2.94998, kNa},
                    {1, 1.2698, 3.08827, kNa},
                    {1.5, 1.6323, 3.48334, kNa},
                    {2, 1.7323, 3.57000, kNa},
                    {2.5, 1.8000, 3.65000, kNa},
                    {3, 1.9691, 3.68515, kNa},
                    {5, 1.9990, 3.69436, kNa},
                    {7, 1.9990, 3.69505, kNa}}}}});

    c.push_back({"tab3",
                 "Drifted Brownian motion, eta = -0.1 and 0.1, first passage, x_r = x",
                 {{"eta=-0.1", fpt(DriftedBM{-0.1}), true,
                   {{0.1, 185., 0.030, 1},
                    {0.5, 4.859, 0.725, 5},
                    {1, 1.159, 2.727, 10},
                    {2, 0.261, 9.659, 20},
                    {3, 0.103, 19.291, 30},
                    {5, 0.027, 42.547, 50},
                    {10, 0., 100., 100}}},
                  {"eta=0.1", fpt(DriftedBM{0.1}), true,
                   {{0.1, 128.072, 0.0312, kInf},
                    {0.5, 5.296, 0.822, kInf},
                    {1, 1.377, 3.505, kInf},
                    {2, 0.370, 15.955, kInf},
                    {3, 0.176, 40.949, kInf},
                    {5, 0.071, 149.025, kInf},
                    {10, 0.022, 1216.25, kInf}}}}});

    c.push_back({"tab4",
                 "Drifted Brownian motion, eta = -1 and 1, first passage, x_r = x",
                 {{"eta=-1", fpt(DriftedBM{-1.0}), true,
                   {{0.1, 114.811, 0.027, 0.1},
                    {0.5, 2.744, 0.425, 0.5},
                    {1, 1.0008, 0.99, 1},
                    {2, 0, 2, 2},
                    {3, 0, 3, 3},
                    {5, 0, 5, 5},
                    {10, 0, 10, 10}}},
                  {"eta=1", fpt(DriftedBM{1.0}), true,
                   {{0.1, 137.767, 0.0350, kInf},
                    {0.5, 7.154, 1.490, kInf},
                    {1, 2.272, 12.162, kInf},
                    {2, 0.802, 231.053, kInf},
                    {3, 0.4620, 2786.840, kInf},
                    {5, 0.2439, 270967., kInf},
                    {10, 0.1104, 125e10, kInf}}}}});

    c.push_back({"tab5",
                 "Brownian motion, exit from (0, 1), x_r = 0.3",
                 {{"eta=0", fet(DriftedBM{0.0}, 0.3), false,
                   {{0, 0, 0, 0},
                    {0.1, 0., 0.09, 0.09},
                    {0.2, 0., 0.16, 0.16},
                    {0.3, 0., 0.21, 0.21},
                    {0.4, 0., 0.24, 0.24},
                    {0.5, 0., 0.25, 0.25}}}}});

    c.push_back({"tab6",
                 "Brownian motion, exit from (0, 1), x_r = 0.2",
                 {{"eta=0", fet(DriftedBM{0.0}, 0.2), false,
                   {{1e-6, 3.4325, 9.8e-8, kNa},
                    {0.1, 14.948, 0.0804, 0.09},
                    {0.2, 28.444, 0.1221, 0.16},
                    {0.3, 38.548, 0.1384, 0.21},
                    {0.4, 43.583, 0.1438, 0.24},
                    {0.5, 45.009, 0.1451, 0.25}}}}});

    c.push_back({"tab7",
                 "Brownian motion, exit from (0, 1), x_r = x",
                 {{"eta=0", fet(DriftedBM{0.0}, 0.5), true,
                   {{0.1, 126.972, 0.0308, 0.09},
                    {0.2, 28.442, 0.1221, 0.16},
                    {0.25, 10.131, 0.1795, 0.1875},
                    {0.27, 2.610, 0.1965, 0.1971},
                    {0.275, 0.580, 0.199, 0.1993},
                    {0.28, 0, 0.201, 0.2016},
                    {0.3, 0, 0.21, 0.21},
                    {0.4, 0, 0.24, 0.24},
                    {0.5, 0, 0.25, 0.25}}}}});

    c.push_back({"tab8",
                 "Drifted Brownian motion, first passage, x_r = 1",
                 {{"eta=-0.1", fpt(DriftedBM{-0.1}), false,
                   {{0.1, 0.448, 0.427, 1},
                    {0.5, 0.708, 1.777, 5},
                    {1, 1.1593, 2.727, 10},
                    {2, 1.7973, 3.269, 20},
                    {3, 1.963, 3.339, 30},
                    {5, 2.0035, 3.351, 50},
                    {10, 2.0049, 3.3513, 100},
                    {50, 2.0049, 3.3513, 500}}},
                  {"eta=0.1", fpt(DriftedBM{0.1}), false,
                   {{0.1, 0.657, 0.624, kInf},
                    {0.5, 0.948, 2.425, kInf},
                    {1, 1.377, 3.505, kInf},
                    {2, 1.873, 4.028, kInf},
                    {3, 1.982, 4.085, kInf},
                    {5, 2.0044, 4.093, kInf},
                    {10, 2.0049, 4.093, kInf},
                    {50, 2.0049, 4.093, kInf}}},
                  {"eta=-1", fpt(DriftedBM{-1.0}), false,
                   {{0.1, 0, 0.1, 0.1},
                    {0.5, 0, 0.5, 0.5},
                    {1, 0.0011, 1., 1},
                    {2, 1.607, 1.566, 2},
                    {3, 2.193, 1.675, 3},
                    {5, 2.396, 1.702, 5},
                    {10, 2.4141, 1.703, 10},
                    {50, 2.4142, 1.703, 10}}},
                  {"eta=1", fpt(DriftedBM{1.0}), false,
                   {{0.1, 1.6009, 3.466, kInf},
                    {0.5, 1.9814, 10.194, kInf},
                    {1, 2.272, 12.162, kInf},
                    {2, 2.405, 12.575, kInf},
                    {3, 2.413, 12.588, kInf},
                    {5, 2.4142, 12.589, kInf},
                    {10, 2.4142, 12.589, kInf},
                    {50, 2.4142, 12.589, kInf}}}}});

    c.push_back({"tab9",
                 "Ornstein-Uhlenbeck, mu = sigma = 1, first passage, x_r = x",
                 {{"mu=1", fpt(OrnsteinUhlenbeck{1.0, 1.0}), true,
                   {{0, 0, 0, 0},
                    {0.1, 49.99, 0.03, 0.16},
                    {0.2, 29.97, 0.11, 0.31},
                    {0.3, 12.29, 0.25, 0.54},
                    {0.4, 6.05, 0.41, 0.57},
                    {0.5, 3.10, 0.59, 0.69},
                    {0.6, 1.42, 0.75, 0.79},
                    {0.7, 0.33, 0.89, 0.891},
                    {0.8, 0, 0.98, 0.98},
                    {0.9, 0, 1.07, 1.07},
                    {1, 0, 1.14, 1.14},
                    {2, 0, 1.72, 1.72},
                    {3, 0, 2.10, 2.10},
                    {5, 0, 2.60, 2.60},
                    {10, 0, 3.29, 3.29},
                    {20, 0, 3.98, 3.98},
                    {30, 0, 4.38, 4.38}}}}});

    c.push_back({"tab10",
                 "Ornstein-Uhlenbeck, sigma = 1, mu = 0.1 and 0.05, first passage, x_r = x",
                 {{"mu=0.1", fpt(OrnsteinUhlenbeck{0.1, 1.0}), true,
                   {{0, 0, 0, 0},
                    {0.1, 29.99, 0.03, 0.54},
                    {0.2, 29.98, 0.12, 1.07},
                    {0.3, 13.93, 0.27, 1.58},
                    {0.4, 7.76, 0.48, 2.08},
                    {0.5, 4.90, 0.75, 2.56},
                    {0.6, 3.35, 1.07, 3.03},
                    {0.7, 2.41, 1.43, 3.47},
                    {0.75, 2.07, 1.63, 3.69},
                    {0.8, 1.80, 1.85, 3.91},
                    {0.9, 1.38, 2.30, 4.33},
                    {1, 1.08, 2.78, 4.74},
                    {1.5, 0.36, 5.49, 6.64},
                    {2, 0.10, 8.06, 8.30},
                    {3, 0, 11.09, 11.09},
                    {5, 0, 15.26, 15.26},
                    {10, 0, 21.73, 21.73},
                    {20, 0, 28.66, 28.66}}},
                  {"mu=0.05", fpt(OrnsteinUhlenbeck{0.05, 1.0}), true,
                   {{0, 0, 0, 0},
                    {0.1, 9.9999, 0.05626, 0.7726},
                    {0.2, 9.9997, 0.14407, 1.5271},
                    {0.3, 9.9996, 0.28103, 2.2642},
                    {0.4, 7.8495, 0.4901, 2.9844},
                    {0.5, 4.9992, 0.7622, 3.6885},
                    {0.6, 3.4399, 1.0915, 4.3770},
                    {0.7, 2.5038, 1.4757, 5.0504},
                    {0.8, 1.8961, 1.9127, 5.7092},
                    {0.9, 1.4793, 2.3997, 6.3539},
                    {1, 1.18107, 2.9338, 6.9851},
                    {1.5, 0.47262, 6.187, 9.9526},
                    {2, 0.2212, 10.0305, 12.6418},
                    {3, 0.0306, 17.1461, 17.3407},
                    {5, 0, 24.7728, 24.7728},
                    {10, 0, 37.0560, 37.0560},
                    {20, 0, 50.8449, 50.8449}}}}});

    c.push_back({"tab11",
                 "Ornstein-Uhlenbeck, mu = sigma = 1, first passage, x_r = 1",
                 {{"mu=1", fpt(OrnsteinUhlenbeck{1.0, 1.0}, 1.0), false,
                   {{0, 0, 0, 0},
                    {0.1, 0, 0.167, 0.167},
                    {0.2, 0, 0.318, 0.318},
                    {0.3, 0, 0.455, 0.455},
                    {0.4, 0, 0.579, 0.579},
                    {0.5, 0, 0.693, 0.693},
                    {1, 0, 1.147, 1.147},
                    {1.5, 0, 1.475, 1.475},
                    {2, 0.388, 1.714, 1.728},
                    {2.5, 0.888, 1.844, 1.933},
                    {3, 1.195, 1.916, 2.105},
                    {5, 1.692, 2.016, 2.599},
                    {7, 1.843, 2.041, 2.931},
                    {10, 1.928, 2.054, 3.284},
                    {15, 1.977, 2.060, 3.687},
                    {20, 1.996, 2.062, 3.974},
                    {50, 2.023, 2.064, 4.886}}}}});

    c.push_back({"tab12",
                 "Ornstein-Uhlenbeck, mu = sigma = 1, first passage, x_r = 2",
                 {{"mu=1", fpt(OrnsteinUhlenbeck{1.0, 1.0}, 2.0), false,
                   {{0, 0, 0, 0},
                    {0.1, 0, 0.167, 0.167},
                    {0.2, 0, 0.318, 0.318},
                    {0.3, 0, 0.455, 0.455},
                    {0.4, 0, 0.579, 0.579},
                    {0.5, 0, 0.693, 0.693},
                    {1, 0, 1.147, 1.147},
                    {1.5, 0, 1.475, 1.475},
                    {2, 0, 1.728, 1.728},
                    {2.5, 0, 1.844, 1.933},
                    {3, 0, 2.106, 2.106},
                    {5, 0, 2.600, 2.600},
                    {7, 0, 2.932, 2.932},
                    {8, 0.008, 3.06500, 3.06505},
                    {10, 0.193, 3.255, 3.286},
                    {15, 0.421, 3.488, 3.689},
                    {20, 0.527, 3.594, 3.976},
                    {50, 0.849, 3.876, 5.580}}}}});

    c.push_back({"tab13",
                 "Drifted Brownian motion, eta = 1 and -1, exit from (0, 1), x_r = 0.2",
                 {{"eta=1", fet(DriftedBM{1.0}, 0.2), false,
                   {{0, 0, 0, 0},
                    {0.1, 14.242, 0.107, 0.109},
                    {0.2, 30.681, 0.156, 0.181},
                    {0.3, 39.731, 0.122, 0.221},
                    {0.4, 43.269, 0.1775, 0.231},
                    {0.45, 43.621, 0.1780, 0.236},
                    {0.5, 43.186, 0.1778, 0.231},
                    {0.6, 39.642, 0.1746, 0.208},
                    {0.7, 30.222, 0.1646, 0.1713},
                    {0.8, 0, 0.123, 0.123},
                    {0.9, 0, 0.065, 0.065},
                    {1, 0, 0, 0}}},
                  {"eta=-1", fet(DriftedBM{-1.0}, 0.2), false,
                   {{0, 0, 0, 0},
                    {0.1, 11.168, 0.059, 0.065},
                    {0.2, 24.277, 0.095, 0.123},
                    {0.3, 36.140, 0.112, 0.171},
                    {0.4, 43.998, 0.118, 0.208},
                    {0.5, 45.857, 0.120, 0.231},
                    {0.6, 45.886, 0.119, 0.236},
                    {0.7, 42.871, 0.116, 0.221},
                    {0.8, 35.547, 0.106, 0.181},
                    {0.9, 24.467, 0.075, 0.109},
                    {1, 0, 0, 0}}}}});
    return c;
}

Cell number_or_empty(double v) {
    if (std::isnan(v)) return std::monostate{};
    return v;
}

}  // namespace

const std::vector<TableDef>& table_catalog() {
    static const std::vector<TableDef> catalog = make_catalog();
    return catalog;
}

const TableDef* find_table(std::string_view name) {
    for (const auto& t : table_catalog()) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

double relative_difference(double computed, double ref) {
    if (computed == ref) return 0.0;
    if (std::isnan(ref) || ref == 0.0 || std::isinf(ref)) return kNa;
    return std::abs(computed - ref) / std::abs(ref);
}

Report build_table(const TableDef& table) {
    struct Job {
        const TablePanel* panel;
        const RefRow* ref;
        ProblemSpec spec;
        OptResult result;
    };
    std::vector<Job> jobs;
    for (const auto& panel : table.panels) {
        for (const auto& row : panel.rows) {
            ProblemSpec spec = panel.family;
            spec.x = row.x;
            if (panel.reset_at_start) spec.x_r = row.x;
            jobs.push_back({&panel, &row, spec, {}});
        }
    }
    parallel_for(jobs.size(), [&](std::size_t i) { jobs[i].result = minimize_over_r(jobs[i].spec); });

    Report rep;
    rep.add_meta("command", "table");
    rep.add_meta("name", table.name);
    rep.add_meta("description", table.description);
    rep.columns = {"panel",  "x",        "x_r",   "r_m",   "m",     "T0",
                   "boundary_optimum",   "ref_r_m",       "ref_m", "ref_T0",
                   "rel_diff_r_m",       "rel_diff_m",    "rel_diff_T0"};
    for (const auto& job : jobs) {
        const OptResult& r = job.result;
        const RefRow& ref = *job.ref;
        rep.rows.push_back({job.panel->label, job.spec.x, job.spec.x_r, r.r_m, r.m, r.baseline,
                            r.boundary_optimum, number_or_empty(ref.r_m), number_or_empty(ref.m),
                            number_or_empty(ref.t0), number_or_empty(relative_difference(r.r_m, ref.r_m)),
                            number_or_empty(relative_difference(r.m, ref.m)),
                            number_or_empty(relative_difference(r.baseline, ref.t0))});
    }
    return rep;
}

}  // namespace resetfpt::cli

#pragma once

#include "resetfpt/models.hpp"

#include <span>
#include <string>
#include <vector>

namespace resetfpt {

struct OptResult {
    double x = 0.0;
    double r_m = 0.0;
    double m = 0.0;
    double baseline = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int evaluations = 0;
    bool boundary_optimum = false;
    bool converged = true;
};

struct OptOptions {
    /// Golden-section stopping width relative to the current midpoint.
    double rel_tol = 1e-8;
    int grid_points = 61;
};

/// argmin over r >= 0 of E[tau(x, r)]: log-grid search, golden-section
/// refinement around the best grid point, then comparison with r = 0.
OptResult minimize_over_r(const ProblemSpec& spec, const OptOptions& options = {});

struct ScanPoint {
    double r = 0.0;
    double mean = 0.0;
    std::string error;  // empty on success
};

struct ScanResult {
    double x = 0.0;
    double x_r = 0.0;
    std::string model;
    std::vector<ScanPoint> grid;
};

/// E[tau(x, r)] at each r. Per-point failures are recorded in ScanPoint::error.
ScanResult scan_over_r(const ProblemSpec& spec, std::span<const double> r_grid);

struct Profile {
    std::vector<OptResult> results;
    /// r_m at the smallest x and the largest r_m over the grid.
    double alpha = 0.0;
    double beta = 0.0;
};

/// minimize_over_r for `family` with x replaced by each grid value. Points are
/// evaluated concurrently; results are in grid order.
Profile profile_over_x(const ProblemSpec& family, std::span<const double> x_grid,
                       const OptOptions& options = {});

std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> lin_grid(double lo, double hi, int n);

}  // namespace resetfpt

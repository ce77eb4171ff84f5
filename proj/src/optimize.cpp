#include "resetfpt/optimize.hpp"

#include "resetfpt/errors.hpp"
#include "resetfpt/lt_core.hpp"
#include "resetfpt/parallel.hpp"
#include "resetfpt/reset_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace resetfpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundaryRule = 1.0 + 1e-9;
constexpr int kMaxExtensions = 6;  // each adds one decade
constexpr int kMaxGoldenIterations = 200;
// Rates below this are indistinguishable from no resetting.
constexpr double kAbsTol = 1e-12;

class Objective {
public:
    explicit Objective(const ProblemSpec& spec) : spec_(spec) {}

    double operator()(double r) {
        ++evaluations_;
        return mean_with_reset({spec_, r, std::nullopt});
    }

    int evaluations() const { return evaluations_; }

private:
    const ProblemSpec& spec_;
    int evaluations_ = 0;
};

struct Bracketed {
    double r = 0.0;
    double value = kInf;
    bool converged = true;
};

Bracketed golden_section(Objective& f, double lo, double hi, double rel_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < kMaxGoldenIterations; ++it) {
        if (hi - lo <= std::max(rel_tol * 0.5 * (lo + hi), kAbsTol)) {
            return fc < fd ? Bracketed{c, fc, true} : Bracketed{d, fd, true};
        }
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return fc < fd ? Bracketed{c, fc, false} : Bracketed{d, fd, false};
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int n) {
    if (n <= 1) return {lo};
    std::vector<double> out(n);
    const double a = std::log(lo);
    const double step = (std::log(hi) - a) / (n - 1);
    for (int i = 0; i < n; ++i) out[i] = std::exp(a + step * i);
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> lin_grid(double lo, double hi, int n) {
    if (n <= 1) return {lo};
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    out.back() = hi;
    return out;
}

OptResult minimize_over_r(const ProblemSpec& input, const OptOptions& options) {
    const ProblemSpec spec = validate(input);
    OptResult out;
    out.x = spec.x;
    if (on_boundary(spec, spec.x)) {
        out.boundary_optimum = true;
        return out;
    }
    out.baseline = baseline_no_reset(spec);

    double lo = 1e-4;
    double hi = 1e4;
    if (is_fet(spec)) {
        lo /= spec.b * spec.b;
        hi = 1e5 / (spec.b * spec.b);
    }
    std::vector<double> rs = log_grid(lo, hi, options.grid_points);
    const double decade_ratio =
        std::pow(hi / lo, 1.0 / std::max(options.grid_points - 1, 1));
    const int per_decade = static_cast<int>(std::lround(std::log(10.0) / std::log(decade_ratio)));

    Objective f(spec);
    std::vector<double> ts;
    ts.reserve(rs.size());
    for (double r : rs) ts.push_back(f(r));

    std::size_t best = std::min_element(ts.begin(), ts.end()) - ts.begin();
    for (int ext = 0; ext < kMaxExtensions && best + 1 == rs.size() && std::isfinite(ts[best]);
         ++ext) {
        for (int k = 0; k < std::max(per_decade, 1); ++k) {
            rs.push_back(rs.back() * decade_ratio);
            ts.push_back(f(rs.back()));
        }
        best = std::min_element(ts.begin(), ts.end()) - ts.begin();
    }
    if (!std::isfinite(ts[best])) {
        throw ConvergenceError("objective is not finite anywhere on the rate grid");
    }

    out.bracket_lo = best == 0 ? 0.0 : rs[best - 1];
    out.bracket_hi = best + 1 < rs.size() ? rs[best + 1] : rs[best];
    Bracketed refined{rs[best], ts[best], true};
    if (best + 1 < rs.size()) {
        refined = golden_section(f, out.bracket_lo, out.bracket_hi, options.rel_tol);
        if (!(refined.value <= ts[best])) refined = {rs[best], ts[best], refined.converged};
    } else {
        refined.converged = false;
    }
    out.converged = refined.converged;
    out.evaluations = f.evaluations();

    if (out.baseline <= kBoundaryRule * refined.value) {
        out.boundary_optimum = true;
        out.r_m = 0.0;
        out.m = out.baseline;
    } else {
        out.r_m = refined.r;
        out.m = refined.value;
    }
    return out;
}

ScanResult scan_over_r(const ProblemSpec& input, std::span<const double> r_grid) {
    const ProblemSpec spec = validate(input);
    ScanResult out;
    out.x = spec.x;
    out.x_r = spec.x_r;
    out.model = model_name(spec.model);
    out.grid.resize(r_grid.size());
    parallel_for(r_grid.size(), [&](std::size_t i) {
        ScanPoint& p = out.grid[i];
        p.r = r_grid[i];
        try {
            p.mean = mean_with_reset({spec, p.r, std::nullopt});
        } catch (const std::exception& e) {
            p.mean = std::numeric_limits<double>::quiet_NaN();
            p.error = e.what();
        }
    });
    return out;
}

Profile profile_over_x(const ProblemSpec& family, std::span<const double> x_grid,
                       const OptOptions& options) {
    Profile out;
    out.results.resize(x_grid.size());
    parallel_for(x_grid.size(), [&](std::size_t i) {
        ProblemSpec spec = family;
        spec.x = x_grid[i];
        out.results[i] = minimize_over_r(spec, options);
    });
    if (!out.results.empty()) {
        const auto smallest = std::min_element(x_grid.begin(), x_grid.end()) - x_grid.begin();
        out.alpha = out.results[smallest].r_m;
        for (const auto& r : out.results) out.beta = std::max(out.beta, r.r_m);
    }
    return out;
}

}  // namespace resetfpt

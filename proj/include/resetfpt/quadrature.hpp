#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace resetfpt::quad {

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
    bool converged = true;
};

/// 20-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration.
struct GaussLegendreRule {
    static constexpr int kOrder = 20;
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};
};

const GaussLegendreRule& gauss_legendre_20();

template <class F>
double gauss_legendre_panel(F& f, double a, double b) {
    const auto& rule = gauss_legendre_20();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < GaussLegendreRule::kOrder; ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * sum;
}

/// Adaptive Gauss-Legendre integration over the panels delimited by
/// `breakpoints` (sorted, at least two entries).
///
/// A panel is accepted when its 20-point estimate agrees with the sum of the
/// estimates on its two halves to within a width-proportional share of
/// `rel_tol * |I|`, where I is the initial whole-range estimate, or to within
/// rounding of the panel itself. The second test matters when the mass sits in
/// a region much narrower than the range.
template <class F>
Result gauss_legendre_adaptive(F&& f, std::span<const double> breakpoints, double rel_tol,
                               double abs_tol = 1e-300, int max_panels = 1 << 14) {
    struct Panel {
        double a, b, estimate;
        int depth;
    };
    Result out;
    if (breakpoints.size() < 2) return out;

    const double width = breakpoints.back() - breakpoints.front();
    if (!(width > 0.0)) return out;

    std::vector<Panel> stack;
    stack.reserve(64);
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(b > a)) continue;
        const double est = gauss_legendre_panel(f, a, b);
        scale += est;
        stack.push_back({a, b, est, 0});
    }
    scale = std::abs(scale);

    constexpr int kMaxDepth = 60;
    constexpr double kRoundingFloor = 64.0 * std::numeric_limits<double>::epsilon();
    double total = 0.0;
    double err = 0.0;
    int evaluated = static_cast<int>(stack.size());
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const double left = gauss_legendre_panel(f, p.a, mid);
        const double right = gauss_legendre_panel(f, mid, p.b);
        const double refined = left + right;
        const double diff = std::abs(refined - p.estimate);
        const double tol = std::max(std::max(rel_tol * scale, abs_tol) * (p.b - p.a) / width,
                                    kRoundingFloor * std::abs(refined));
        evaluated += 2;
        if (diff <= tol || p.depth >= kMaxDepth || mid <= p.a || mid >= p.b) {
            if (diff > tol) out.converged = false;
            total += refined;
            err += diff;
            ++out.panels;
            continue;
        }
        if (evaluated > max_panels) {
            out.converged = false;
            total += refined;
            err += diff;
            ++out.panels;
            continue;
        }
        stack.push_back({p.a, mid, left, p.depth + 1});
        stack.push_back({mid, p.b, right, p.depth + 1});
    }
    out.value = total;
    out.error_estimate = err;
    return out;
}

template <class F>
Result gauss_legendre_adaptive(F&& f, double a, double b, double rel_tol,
                               double abs_tol = 1e-300) {
    const std::array<double, 2> bp{a, b};
    return gauss_legendre_adaptive(std::forward<F>(f), std::span<const double>(bp), rel_tol,
                                   abs_tol);
}

/// Adaptive Simpson with Richardson correction; `tol` is relative to the
/// magnitude of the coarse whole-interval estimate.
template <class F>
Result adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 50) {
    struct Segment {
        double a, b, fa, fm, fb, whole, eps;
        int depth;
    };
    Result out;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double eps = tol * std::max(std::abs(whole), 1e-300);

    std::vector<Segment> stack{{a, b, fa, fm, fb, whole, eps, 0}};
    double total = 0.0;
    while (!stack.empty()) {
        const Segment s = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        const double lm = 0.5 * (s.a + mid);
        const double rm = 0.5 * (mid + s.b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (mid - s.a) / 6.0 * (s.fa + 4.0 * flm + s.fm);
        const double right = (s.b - mid) / 6.0 * (s.fm + 4.0 * frm + s.fb);
        const double delta = left + right - s.whole;
        if (std::abs(delta) <= 15.0 * s.eps || s.depth >= max_depth) {
            if (std::abs(delta) > 15.0 * s.eps) out.converged = false;
            total += left + right + delta / 15.0;
            out.error_estimate += std::abs(delta) / 15.0;
            ++out.panels;
            continue;
        }
        stack.push_back({s.a, mid, s.fa, flm, s.fm, left, 0.5 * s.eps, s.depth + 1});
        stack.push_back({mid, s.b, s.fm, frm, s.fb, right, 0.5 * s.eps, s.depth + 1});
    }
    out.value = total;
    return out;
}

}  // namespace resetfpt::quad

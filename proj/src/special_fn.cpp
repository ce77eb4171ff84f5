#include "resetfpt/special_fn.hpp"

#include "resetfpt/errors.hpp"
#include "resetfpt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace resetfpt {

namespace {

// Panel tolerance for the integral representation. Two orders of magnitude
// tighter than the advertised accuracy so that finite differences of D stay
// meaningful.
constexpr double kPanelRelTol = 1e-13;

// Half-width of the integration window around the integrand peak. The log of
// the integrand has curvature <= -1 there, so the discarded tails are below
// exp(-72) relative to the peak.
constexpr double kWindow = 12.0;

// Below this order the integral is evaluated with the 1/a part split off.
constexpr double kSmallOrder = 0.1;

// From this order on t^(a-1) is smooth enough at 0 for direct integration.
constexpr double kRegularOrder = 3.0;

void check_args(double nu, double z) {
    if (!std::isfinite(nu) || !std::isfinite(z)) {
        throw DomainError("parabolic cylinder function: non-finite argument");
    }
    if (nu > 0.0) {
        throw DomainError("parabolic cylinder function: order nu = " + std::to_string(nu) +
                          " > 0 is not supported");
    }
}

std::vector<double> clipped_breakpoints(double lo, double hi, std::initializer_list<double> inner) {
    std::vector<double> pts{lo, hi};
    for (double p : inner) {
        if (p > lo && p < hi) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

quad::Result integrate_or_throw(auto&& f, const std::vector<double>& bp, double a, double z,
                                double abs_tol = 1e-300) {
    auto res = quad::gauss_legendre_adaptive(f, std::span<const double>(bp), kPanelRelTol, abs_tol);
    if (!res.converged || !std::isfinite(res.value) || res.value < 0.0) {
        throw ConvergenceError("parabolic cylinder quadrature did not converge (nu = " +
                               std::to_string(-a) + ", z = " + std::to_string(z) + ")");
    }
    return res;
}

// log( int_0^inf t^(a-1) exp(-t^2/2 - z t) dt / Gamma(a) ) for a >= 3.
// The log-integrand phi is strictly concave, so a window around its maximum
// captures the whole integral.
double log_scaled_integral_regular(double a, double z) {
    const double am1 = a - 1.0;
    double peak = 0.0;
    if (am1 == 0.0) {
        peak = std::max(0.0, -z);
    } else {
        const double disc = std::sqrt(z * z + 4.0 * am1);
        peak = z > 0.0 ? 2.0 * am1 / (z + disc) : 0.5 * (disc - z);
    }
    auto phi = [am1, z](double t) {
        double v = -0.5 * t * t - z * t;
        if (am1 != 0.0) v += am1 * std::log(t);
        return v;
    };
    const double shift = phi(peak);
    // phi(t) - phi(peak) without cancellation: at an interior peak
    // am1 / peak = peak + z, which leaves am1 (log1p(u) - u) - d^2/2.
    auto phi_rel = [am1, z, peak](double t) {
        const double d = t - peak;
        if (peak == 0.0) return -d * z - 0.5 * d * d;
        const double u = d / peak;
        return am1 * (std::log1p(u) - u) - 0.5 * d * d;
    };
    const double curvature = 1.0 + (peak > 0.0 ? am1 / (peak * peak) : 0.0);
    const double w = 1.0 / std::sqrt(curvature);

    const double lo = std::max(0.0, peak - kWindow);
    const double hi = peak + kWindow;
    const auto bp = clipped_breakpoints(
        lo, hi, {peak - 4.0 * w, peak - w, peak, peak + w, peak + 4.0 * w});

    auto f = [&](double t) { return std::exp(phi_rel(t)); };
    const auto res = integrate_or_throw(f, bp, a, z);
    return shift + std::log(res.value) - std::lgamma(a);
}

// -t^2/2 - z t - shift, with shift = z^2/2 for z < 0 and 0 otherwise.
double shifted_exponent(double t, double z) {
    return z < 0.0 ? -0.5 * (t + z) * (t + z) : -0.5 * t * t - z * t;
}

// int_1^inf t^(a-1) exp(-t^2/2 - z t - shift) dt for 0 < a < 1.
double far_tail(double a, double z) {
    auto far = [&](double t) {
        return std::exp((a - 1.0) * std::log(t) + shifted_exponent(t, z));
    };
    const double centre = std::max(1.0, -z);
    const double hi = centre + kWindow;
    const auto bp = clipped_breakpoints(1.0, hi, {centre - 4.0, centre - 1.0, centre,
                                                  centre + 1.0, centre + 4.0});
    const auto res = quad::gauss_legendre_adaptive(far, std::span<const double>(bp), kPanelRelTol);
    if (!res.converged || !std::isfinite(res.value)) {
        throw ConvergenceError("parabolic cylinder quadrature did not converge (nu = " +
                               std::to_string(-a) + ", z = " + std::to_string(z) + ")");
    }
    return res.value;
}

// Same quantity for 0.1 <= a < 3, where t^(a-1) is not smooth at the origin.
// On [0, 1] substitute t = u^m with m a >= 8, which turns t^(a-1) dt into
// m u^(m a - 1) du, smooth enough for the Gauss-Legendre panels; [1, inf) is
// regular.
double log_scaled_integral_singular(double a, double z) {
    const double m = std::ceil(8.0 / a);
    const double power = m * a - 1.0;
    const double inv_m = 1.0 / m;

    auto near = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double log_u = std::log(u);
        const double t = std::exp(m * log_u);
        return m * std::exp(power * log_u + shifted_exponent(t, z));
    };
    // Breakpoints in u matching t = 1e-3, 0.1, 0.5.
    const auto bp_near = clipped_breakpoints(
        0.0, 1.0, {std::pow(1e-3, inv_m), std::pow(0.1, inv_m), std::pow(0.5, inv_m)});
    // For z << 0 the mass sits beyond t = 1 and the near part only needs to be
    // resolved relative to it.
    const double far_integral = far_tail(a, z);
    const double near_integral =
        integrate_or_throw(near, bp_near, a, z, 1e-17 * far_integral).value;
    const double shift = z < 0.0 ? 0.5 * z * z : 0.0;
    return shift + std::log(near_integral + far_integral) - std::lgamma(a);
}

// Same quantity for 0 < a < 0.1. The s = t^a map amplifies rounding by 1/a
// here, so instead split off int_0^1 t^(a-1) dt = 1/a and integrate
// t^(a-1) (g(t) - 1) on [0, 1] with t = u^2.
double log_scaled_integral_small(double a, double z) {
    const double shift = z < 0.0 ? 0.5 * z * z : 0.0;
    const double scale = std::exp(-shift);

    auto near = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double t = u * u;
        const double phi = -0.5 * t * t - z * t;
        const double g_minus_one =
            (shift == 0.0 || phi < 1.0) ? std::expm1(phi) * scale
                                        : std::exp(shifted_exponent(t, z)) - scale;
        return 2.0 * std::exp((2.0 * a - 1.0) * std::log(u)) * g_minus_one;
    };
    const auto bp_near = clipped_breakpoints(0.0, 1.0, {1e-3, 0.1, 0.5});
    auto res = quad::gauss_legendre_adaptive(near, std::span<const double>(bp_near), kPanelRelTol,
                                             1e-16 * scale / a);
    if (!res.converged || !std::isfinite(res.value)) {
        throw ConvergenceError("parabolic cylinder quadrature did not converge (nu = " +
                               std::to_string(-a) + ", z = " + std::to_string(z) + ")");
    }
    const double far_integral = far_tail(a, z);
    const double combined =
        scale / std::tgamma(a + 1.0) + (res.value + far_integral) / std::tgamma(a);
    if (!(combined > 0.0)) {
        throw ConvergenceError("parabolic cylinder evaluation lost all precision (nu = " +
                               std::to_string(-a) + ", z = " + std::to_string(z) + ")");
    }
    return shift + std::log(combined);
}

}  // namespace

double log_pcf_d(double nu, double z) {
    check_args(nu, z);
    const double gauss = -0.25 * z * z;
    if (nu == 0.0) return gauss;
    const double a = -nu;
    if (a >= kRegularOrder) return gauss + log_scaled_integral_regular(a, z);
    if (a >= kSmallOrder) return gauss + log_scaled_integral_singular(a, z);
    return gauss + log_scaled_integral_small(a, z);
}

double pcf_d(double nu, double z) {
    if (nu == 0.0) {
        check_args(nu, z);
        return std::exp(-0.25 * z * z);
    }
    return std::exp(log_pcf_d(nu, z));
}

double pcf_d(const PcfArgs& args) { return pcf_d(args.nu, args.z); }

double log_pcf_d_at_zero(double nu) {
    check_args(nu, 0.0);
    return 0.5 * nu * std::numbers::ln2 + 0.5 * std::log(std::numbers::pi) -
           std::lgamma(0.5 * (1.0 - nu));
}

double pcf_d_at_zero(double nu) { return std::exp(log_pcf_d_at_zero(nu)); }

}  // namespace resetfpt

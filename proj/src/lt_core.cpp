#include "resetfpt/lt_core.hpp"

#include "resetfpt/errors.hpp"
#include "resetfpt/quadrature.hpp"
#include "resetfpt/special_fn.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace resetfpt {

namespace {

using ld = long double;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxCondition = 1e12;

void check_lam(double lam) {
    if (!(lam > 0.0) || !std::isfinite(lam)) {
        throw DomainError("Laplace argument must be positive and finite, got " + std::to_string(lam));
    }
}

// log sinh(u) for u >= 0; -inf at u = 0.
ld log_sinh(ld u) { return u + std::log(-std::expm1(-2.0L * u)) - std::numbers::ln2_v<ld>; }

// log cosh(u) for u >= 0.
ld log_cosh(ld u) { return u + std::log1p(std::exp(-2.0L * u)) - std::numbers::ln2_v<ld>; }

ld log_add_exp(ld a, ld b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<ld>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

// ---------------------------------------------------------------- drifted BM

// eta + sqrt(eta^2 + 2 lam) without cancellation for eta < 0.
double fpt_bm_rate(double eta, double lam) {
    const double root = std::sqrt(eta * eta + 2.0 * lam);
    return eta >= 0.0 ? eta + root : 2.0 * lam / (root - eta);
}

struct FetBm {
    ld log_m0;
    ld one_minus;
};

FetBm fet_bm(double eta, double x, double b, double lam) {
    if (x <= 0.0 || x >= b) return {0.0L, 0.0L};
    const ld e = eta;
    const ld beta = std::sqrt(e * e + 2.0L * static_cast<ld>(lam));
    const ld lx = x;
    const ld lb = b;
    const ld log_s = log_sinh(beta * lb);
    const ld log_a = -e * lx + log_sinh(beta * (lb - lx)) - log_s;
    const ld log_b = e * (lb - lx) + log_sinh(beta * lx) - log_s;
    const ld log_m0 = std::min(log_add_exp(log_a, log_b), 0.0L);
    ld one_minus = 0.0L;
    if (eta == 0.0) {
        // 1 - cosh(beta (b/2 - x)) / cosh(beta b/2)
        one_minus = std::exp(std::numbers::ln2_v<ld> + log_sinh(0.5L * beta * lx) +
                             log_sinh(0.5L * beta * (lb - lx)) - log_cosh(0.5L * beta * lb));
    } else {
        one_minus = -std::expm1(log_m0);
    }
    return {log_m0, std::max(one_minus, 0.0L)};
}

// d/dlam log M_0 for the exit problem of drifted BM.
double fet_bm_dlog(double eta, double x, double b, double lam) {
    if (x <= 0.0 || x >= b) return 0.0;
    const ld e = eta;
    const ld beta = std::sqrt(e * e + 2.0L * static_cast<ld>(lam));
    const ld lx = x;
    const ld lb = b;
    const ld u1 = beta * (lb - lx);
    const ld u2 = beta * lx;
    const ld v = beta * lb;
    const ld log_s = log_sinh(v);
    const ld log_a = -e * lx + log_sinh(u1) - log_s;
    const ld log_b = e * (lb - lx) + log_sinh(u2) - log_s;
    const ld log_m0 = log_add_exp(log_a, log_b);
    const ld coth = 1.0L / std::tanh(v);
    // dM0/dbeta, each term scaled by 1/M0
    const ld da = (lb - lx) * std::exp(-e * lx + log_cosh(u1) - log_s - log_m0) -
                  std::exp(log_a - log_m0) * lb * coth;
    const ld db = lx * std::exp(e * (lb - lx) + log_cosh(u2) - log_s - log_m0) -
                  std::exp(log_b - log_m0) * lb * coth;
    return static_cast<double>((da + db) / beta);
}

// --------------------------------------------------------------------- OU

double ou_scale(double mu, double sigma) { return std::sqrt(2.0 * mu) / sigma; }

double log_m0_fpt_ou(double mu, double sigma, double x, double lam) {
    if (x <= 0.0) return 0.0;
    const double z = x * ou_scale(mu, sigma);
    const double nu = -lam / mu;
    const double v = 0.25 * z * z + log_pcf_d(nu, z) - log_pcf_d(nu, 0.0);
    return std::min(v, 0.0);
}

// Boundary system for M_0 = c1 u1 + c2 u2 on (0, b), where
// u1(x) = exp(z^2/4) D(-z) and u2(x) = exp(z^2/4) D(z). With y1 = c1 u1(b) and
// y2 = c2 D(0) the conditions M_0(0) = M_0(b) = 1 read
//   rho1 y1 + y2 = 1,   y1 + rho2 y2 = 1,
// rho1 = D(0)/u1(b), rho2 = u2(b)/D(0), both of moderate size.
struct FetOuSystem {
    double nu = 0.0;
    double scale = 0.0;
    double log_u1b = 0.0;
    double log_d0 = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    double condition = 1.0;
};

FetOuSystem fet_ou_system(double mu, double sigma, double b, double lam) {
    FetOuSystem s;
    s.nu = -lam / mu;
    s.scale = ou_scale(mu, sigma);
    const double zb = b * s.scale;
    const double gauss = 0.25 * zb * zb;
    s.log_d0 = log_pcf_d(s.nu, 0.0);
    s.log_u1b = gauss + log_pcf_d(s.nu, -zb);
    const double log_u2b = gauss + log_pcf_d(s.nu, zb);
    const double rho1 = std::exp(s.log_d0 - s.log_u1b);
    const double rho2 = std::exp(log_u2b - s.log_d0);

    const std::array<std::array<double, 2>, 2> a{{{rho1, 1.0}, {1.0, rho2}}};
    const double det = rho1 * rho2 - 1.0;
    const double norm_a = std::max(rho1 + 1.0, 1.0 + rho2);
    const double norm_inv = std::max(rho2 + 1.0, 1.0 + rho1) / std::abs(det);
    s.condition = det == 0.0 ? kInf : norm_a * norm_inv;
    if (!(s.condition <= kMaxCondition)) {
        throw SingularSystemError("exit-time boundary system is numerically singular (lam = " +
                                      std::to_string(lam) + ", b = " + std::to_string(b) + ")",
                                  s.condition);
    }
    // Gaussian elimination with partial pivoting on the first column.
    const int p = std::abs(a[0][0]) >= std::abs(a[1][0]) ? 0 : 1;
    const int q = 1 - p;
    const double f = a[q][0] / a[p][0];
    const double a11 = a[q][1] - f * a[p][1];
    const double rhs1 = 1.0 - f * 1.0;
    s.y2 = rhs1 / a11;
    s.y1 = (1.0 - a[p][1] * s.y2) / a[p][0];
    return s;
}

double m0_fet_ou_log(double mu, double sigma, double x, double b, double lam) {
    if (x <= 0.0 || x >= b) return 0.0;
    const FetOuSystem s = fet_ou_system(mu, sigma, b, lam);
    const double z = x * s.scale;
    const double gauss = 0.25 * z * z;
    const double log_u1 = gauss + log_pcf_d(s.nu, -z);
    const double log_u2 = gauss + log_pcf_d(s.nu, z);
    const double m0 = s.y1 * std::exp(log_u1 - s.log_u1b) + s.y2 * std::exp(log_u2 - s.log_d0);
    if (!(m0 > 0.0)) {
        throw ConvergenceError("exit-time transform lost all precision (lam = " +
                               std::to_string(lam) + ")");
    }
    return std::min(std::log(m0), 0.0);
}

// ------------------------------------------------------------- conjugated

double map_forward(const MonotoneMap& map, double x, const char* what) {
    if (!map.contains(x)) {
        throw DomainError(std::string(what) + " = " + std::to_string(x) +
                          " outside the domain of map '" + map.name + "'");
    }
    return map.forward(x);
}

// ------------------------------------------------------------ dispatcher

struct LogLt {
    double log_m0;
    double one_minus;
};

LogLt from_log(double log_m0) { return {log_m0, -std::expm1(log_m0)}; }

LogLt log_lt_unchecked(const ProblemSpec& spec, double pos, double lam) {
    if (on_boundary(spec, pos)) return {0.0, 0.0};
    struct Visitor {
        const ProblemSpec& spec;
        double pos;
        double lam;

        LogLt operator()(const DriftedBM& m) const {
            if (spec.kind == ProblemKind::Fpt) return from_log(-pos * fpt_bm_rate(m.eta, lam));
            const FetBm v = fet_bm(m.eta, pos, spec.b, lam);
            return {static_cast<double>(v.log_m0), static_cast<double>(v.one_minus)};
        }
        LogLt operator()(const OrnsteinUhlenbeck& m) const {
            if (spec.kind == ProblemKind::Fpt) return from_log(log_m0_fpt_ou(m.mu, m.sigma, pos, lam));
            return from_log(m0_fet_ou_log(m.mu, m.sigma, pos, spec.b, lam));
        }
        LogLt operator()(const Cir& m) const {
            const double y = std::sqrt(pos);
            if (spec.kind == ProblemKind::Fpt) return from_log(log_m0_fpt_ou(m.mu, m.sigma, y, lam));
            return from_log(m0_fet_ou_log(m.mu, m.sigma, y, std::sqrt(spec.b), lam));
        }
        LogLt operator()(const Conjugated& m) const {
            const double v = map_forward(m.map, pos, "position");
            if (spec.kind == ProblemKind::Fpt) return from_log(-v * std::sqrt(2.0 * lam));
            const double vb = map_forward(m.map, spec.b, "b");
            const FetBm r = fet_bm(0.0, v, vb, lam);
            return {static_cast<double>(r.log_m0), static_cast<double>(r.one_minus)};
        }
    };
    return std::visit(Visitor{spec, pos, lam}, spec.model);
}

// Arguments far outside any sensible range (sigma ~ 1e-200, x ~ 1e160) can
// turn the log transform into inf - inf; report that instead of passing NaN on.
LogLt log_lt(const ProblemSpec& spec, double pos, double lam) {
    const LogLt v = log_lt_unchecked(spec, pos, lam);
    if (std::isnan(v.log_m0) || std::isnan(v.one_minus)) {
        throw ConvergenceError("Laplace transform evaluation lost all precision (" + model_name(spec.model) +
                               ", position = " + std::to_string(pos) + ", lam = " + std::to_string(lam) + ")");
    }
    return v;
}

double richardson_q0_hat(const ProblemSpec& spec) {
    const double q_small = lt_no_reset(spec, spec.x, 5e-5).q0_hat;
    const double q_large = lt_no_reset(spec, spec.x, 1e-4).q0_hat;
    return 2.0 * q_small - q_large;
}

}  // namespace

double m0_fpt_bm(double eta, double x, double lam) {
    check_lam(lam);
    if (x <= 0.0) return 1.0;
    return std::exp(-x * fpt_bm_rate(eta, lam));
}

double m0_fpt_ou(double mu, double sigma, double x, double lam) {
    check_lam(lam);
    return std::exp(log_m0_fpt_ou(mu, sigma, x, lam));
}

double m0_fpt_cir(double mu, double sigma, double x, double lam) {
    return m0_fpt_ou(mu, sigma, std::sqrt(x), lam);
}

double m0_fpt_conjugated(const MonotoneMap& map, double x, double lam) {
    return m0_fpt_bm(0.0, map_forward(map, x, "x"), lam);
}

double m0_fet_bm(double eta, double x, double b, double lam) {
    check_lam(lam);
    return static_cast<double>(std::exp(fet_bm(eta, x, b, lam).log_m0));
}

double q0_hat_fet_bm(double eta, double x, double b, double lam) {
    check_lam(lam);
    return static_cast<double>(fet_bm(eta, x, b, lam).one_minus / lam);
}

double m0_fet_ou(double mu, double sigma, double x, double b, double lam) {
    check_lam(lam);
    return std::exp(m0_fet_ou_log(mu, sigma, x, b, lam));
}

double m0_fet_cir(double mu, double sigma, double x, double b, double lam) {
    return m0_fet_ou(mu, sigma, std::sqrt(x), std::sqrt(b), lam);
}

double m0_fet_conjugated(const MonotoneMap& map, double x, double b, double lam) {
    return m0_fet_bm(0.0, map_forward(map, x, "x"), map_forward(map, b, "b"), lam);
}

double fet_ou_condition(double mu, double sigma, double b, double lam) {
    check_lam(lam);
    try {
        return fet_ou_system(mu, sigma, b, lam).condition;
    } catch (const SingularSystemError& e) {
        return e.condition();
    }
}

LtValue lt_no_reset(const ProblemSpec& spec, double position, double lam) {
    check_lam(lam);
    const LogLt v = log_lt(spec, position, lam);
    return {std::exp(v.log_m0), v.one_minus / lam, v.log_m0};
}

double dlog_m0_dlam(const ProblemSpec& spec, double position, double lam, DerivativeMode mode) {
    check_lam(lam);
    if (on_boundary(spec, position)) return 0.0;
    if (mode == DerivativeMode::Automatic) {
        if (const auto* m = std::get_if<DriftedBM>(&spec.model)) {
            if (spec.kind == ProblemKind::Fpt) return -position / std::sqrt(m->eta * m->eta + 2.0 * lam);
            return fet_bm_dlog(m->eta, position, spec.b, lam);
        }
        if (const auto* m = std::get_if<Conjugated>(&spec.model)) {
            const double v = map_forward(m->map, position, "position");
            if (spec.kind == ProblemKind::Fpt) return -v / std::sqrt(2.0 * lam);
            return fet_bm_dlog(0.0, v, map_forward(m->map, spec.b, "b"), lam);
        }
    }
    const double h = std::min(std::max(1e-5 * lam, 1e-7), 0.5 * lam);
    const double up = log_lt(spec, position, lam + h).log_m0;
    const double down = log_lt(spec, position, lam - h).log_m0;
    return (up - down) / (2.0 * h);
}

double ou_mean_fpt_integral(double mu, double sigma, double x) {
    if (x <= 0.0) return 0.0;
    const double c = sigma * sigma / (4.0 * mu);
    // exp(-c y^2) < 1e-18 beyond y_max
    const double y_max = std::sqrt(41.45 / c);
    auto f = [c, x](double y) {
        if (y == 0.0) return x;
        return std::exp(-c * y * y) * (-std::expm1(-x * y)) / y;
    };
    const auto res = quad::adaptive_simpson(f, 0.0, y_max, 1e-10);
    if (!res.converged || !std::isfinite(res.value)) {
        throw ConvergenceError("mean passage-time quadrature did not converge");
    }
    return res.value / mu;
}

double baseline_no_reset(const ProblemSpec& spec) {
    if (on_boundary(spec, spec.x)) return 0.0;
    struct Visitor {
        const ProblemSpec& spec;

        double operator()(const DriftedBM& m) const {
            const double x = spec.x;
            if (spec.kind == ProblemKind::Fpt) return m.eta >= 0.0 ? kInf : -x / m.eta;
            const double b = spec.b;
            if (m.eta == 0.0) return x * (b - x);
            const ld e = m.eta;
            const ld ratio = std::expm1(-2.0L * e * x) / std::expm1(-2.0L * e * b);
            return static_cast<double>((b * ratio - x) / e);
        }
        double operator()(const OrnsteinUhlenbeck& m) const {
            if (spec.kind == ProblemKind::Fpt) return ou_mean_fpt_integral(m.mu, m.sigma, spec.x);
            return richardson_q0_hat(spec);
        }
        double operator()(const Cir& m) const {
            if (spec.kind == ProblemKind::Fpt) {
                return ou_mean_fpt_integral(m.mu, m.sigma, std::sqrt(spec.x));
            }
            return richardson_q0_hat(spec);
        }
        double operator()(const Conjugated& m) const {
            if (spec.kind == ProblemKind::Fpt) return kInf;
            const double v = map_forward(m.map, spec.x, "x");
            const double vb = map_forward(m.map, spec.b, "b");
            return v * (vb - v);
        }
    };
    return std::visit(Visitor{spec}, spec.model);
}

}  // namespace resetfpt

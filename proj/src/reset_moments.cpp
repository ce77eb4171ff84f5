#include "resetfpt/reset_moments.hpp"

#include "resetfpt/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace resetfpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxLogMean = 700.0;
constexpr double kMinSecondMomentRate = 1e-8;

void check_rate(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw DomainError("resetting rate must be non-negative and finite, got " + std::to_string(r));
    }
}

double require_lam(const ResetQuery& q) {
    if (!q.lam) throw ValidationError("transform argument lam is required");
    if (!(*q.lam > 0.0) || !std::isfinite(*q.lam)) {
        throw DomainError("transform argument lam must be positive and finite");
    }
    return *q.lam;
}

// log E[tau] = log Q̂_0(x, r) - log M_0(x_r, r)
double log_mean(const ProblemSpec& spec, double r) {
    const LtValue at_x = lt_no_reset(spec, spec.x, r);
    const LtValue at_r = lt_no_reset(spec, spec.x_r, r);
    return std::log(at_x.q0_hat) - at_r.log_m0;
}

}  // namespace

double lt_with_reset(const ResetQuery& q) {
    check_rate(q.r);
    const double lam = require_lam(q);
    const double s = lam + q.r;
    const double m_x = lt_no_reset(q.spec, q.spec.x, s).m0;
    if (q.r == 0.0) return m_x;
    const double m_r = lt_no_reset(q.spec, q.spec.x_r, s).m0;
    return (q.r * m_r + lam * m_x) / (lam + q.r * m_r);
}

double survival_lt_with_reset(const ResetQuery& q) {
    check_rate(q.r);
    const double lam = require_lam(q);
    const double s = lam + q.r;
    const double q_x = lt_no_reset(q.spec, q.spec.x, s).q0_hat;
    if (q.r == 0.0) return q_x;
    const double m_r = lt_no_reset(q.spec, q.spec.x_r, s).m0;
    // 1 - r Q̂_0(x_r, s) = (lam + r M_0(x_r, s)) / s
    return q_x * s / (lam + q.r * m_r);
}

double mean_with_reset(const ResetQuery& q) {
    check_rate(q.r);
    if (on_boundary(q.spec, q.spec.x)) return 0.0;
    if (q.r == 0.0) return baseline_no_reset(q.spec);
    const double lm = log_mean(q.spec, q.r);
    return lm > kMaxLogMean ? kInf : std::exp(lm);
}

double second_moment_with_reset(const ResetQuery& q, DerivativeMode mode) {
    check_rate(q.r);
    if (on_boundary(q.spec, q.spec.x)) return 0.0;
    if (q.r < kMinSecondMomentRate) {
        throw DomainError("second moment needs r >= 1e-8; use the no-reset baseline for r = 0");
    }
    const double r = q.r;
    const LtValue at_x = lt_no_reset(q.spec, q.spec.x, r);
    const LtValue at_r = lt_no_reset(q.spec, q.spec.x_r, r);
    const double g_x = dlog_m0_dlam(q.spec, q.spec.x, r, mode);
    const double g_r = dlog_m0_dlam(q.spec, q.spec.x_r, r, mode);
    const double lm = std::log(at_x.q0_hat) - at_r.log_m0;
    if (lm > kMaxLogMean) return kInf;
    const double mean = std::exp(lm);
    // E[tau^2] = 2/(r M_R^2) [M_R M_x' + Q̂_x (1 + r M_R')] with M' = M g
    const double ratio = std::exp(at_x.log_m0 - at_r.log_m0);
    const double value =
        (2.0 / r) * (ratio * g_x + mean * std::exp(-at_r.log_m0) + r * mean * g_r);
    return std::isfinite(value) ? value : kInf;
}

MomentResult moments_with_reset(const ResetQuery& q, DerivativeMode mode) {
    MomentResult out;
    out.mean = mean_with_reset(q);
    if (q.r > 0.0 && !on_boundary(q.spec, q.spec.x)) {
        out.second = second_moment_with_reset(q, mode);
        if (std::isfinite(*out.second) && std::isfinite(out.mean)) {
            out.variance = std::max(*out.second - out.mean * out.mean, 0.0);
        }
    }
    return out;
}

}  // namespace resetfpt

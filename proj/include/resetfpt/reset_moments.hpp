#pragma once

#include "resetfpt/lt_core.hpp"
#include "resetfpt/models.hpp"

#include <optional>

namespace resetfpt {

struct ResetQuery {
    ProblemSpec spec;
    double r = 0.0;
    std::optional<double> lam;
};

struct MomentResult {
    double mean = 0.0;
    std::optional<double> second;
    std::optional<double> variance;
};

/// E[exp(-lam tau(x, r))]. Requires q.lam.
double lt_with_reset(const ResetQuery& q);

/// Laplace transform of P[tau(x, r) > t] at q.lam.
double survival_lt_with_reset(const ResetQuery& q);

/// E[tau(x, r)]. r = 0 falls back to baseline_no_reset. Returns +inf when the
/// mean exceeds exp(700).
double mean_with_reset(const ResetQuery& q);

/// E[tau(x, r)^2] for r >= 1e-8.
double second_moment_with_reset(const ResetQuery& q,
                                DerivativeMode mode = DerivativeMode::Automatic);

/// Mean, plus second moment and variance when r > 0.
MomentResult moments_with_reset(const ResetQuery& q,
                                DerivativeMode mode = DerivativeMode::Automatic);

}  // namespace resetfpt

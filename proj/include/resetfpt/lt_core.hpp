#pragma once

#include "resetfpt/models.hpp"

namespace resetfpt {

/// No-reset Laplace transforms at one point. `q0_hat` is (1 - m0)/lam, computed
/// without forming 1 - m0 by subtraction where the model allows it.
struct LtValue {
    double m0 = 1.0;
    double q0_hat = 0.0;
    double log_m0 = 0.0;
};

// First passage through 0.
double m0_fpt_bm(double eta, double x, double lam);
double m0_fpt_ou(double mu, double sigma, double x, double lam);
double m0_fpt_cir(double mu, double sigma, double x, double lam);
double m0_fpt_conjugated(const MonotoneMap& map, double x, double lam);

// First exit from (0, b).
double m0_fet_bm(double eta, double x, double b, double lam);
double q0_hat_fet_bm(double eta, double x, double b, double lam);
double m0_fet_ou(double mu, double sigma, double x, double b, double lam);
double m0_fet_cir(double mu, double sigma, double x, double b, double lam);
double m0_fet_conjugated(const MonotoneMap& map, double x, double b, double lam);

/// Condition estimate (infinity norm) of the scaled boundary system behind
/// m0_fet_ou. Values above 1e12 make m0_fet_ou throw SingularSystemError.
double fet_ou_condition(double mu, double sigma, double b, double lam);

/// M_0 and Q̂_0 of `spec`'s diffusion started at `position` (x or x_r).
LtValue lt_no_reset(const ProblemSpec& spec, double position, double lam);

enum class DerivativeMode {
    /// Closed form for Brownian and conjugated models, finite differences otherwise.
    Automatic,
    FiniteDifference,
};

/// d/dlam log M_0(position, lam). The finite-difference path is a central
/// difference with step min(max(1e-5 lam, 1e-7), lam / 2).
double dlog_m0_dlam(const ProblemSpec& spec, double position, double lam,
                    DerivativeMode mode = DerivativeMode::Automatic);

/// E[tau(x, 0)]; +inf when the passage time has infinite mean.
double baseline_no_reset(const ProblemSpec& spec);

/// (1/mu) int_0^inf exp(-sigma^2 y^2 / (4 mu)) (1 - exp(-x y)) / y dy: the mean
/// OU passage time through 0 from x.
double ou_mean_fpt_integral(double mu, double sigma, double x);

}  // namespace resetfpt

#pragma once

#include "resetfpt/models.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace resetfpt {

struct SimConfig {
    double dt = 1e-4;
    std::size_t n_paths = 100000;
    /// Per-path time cap; 0 selects default_t_max.
    double t_max = 0.0;
    std::uint64_t seed = 20240601;
    /// Brownian-bridge test for crossings between grid points.
    bool bridge_correction = true;
    /// Conjugated models only: Euler-Maruyama on the map's own SDE instead of
    /// exact Brownian steps in v-coordinates.
    bool natural_coordinates = false;
    /// When set, E[exp(-lam tau)] is estimated as well.
    std::optional<double> lam;
};

struct McEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    double second_moment = 0.0;
    double second_std_err = 0.0;
    double censored_fraction = 0.0;
    std::size_t n_paths = 0;
    /// False when more than 1e-4 of the paths hit t_max.
    bool reliable = true;
    double dt = 0.0;
    double t_max = 0.0;
    bool bridge_correction = false;
    std::string integrator;
    std::optional<double> lt;
    std::optional<double> lt_std_err;
};

/// Direct simulation of the resetting diffusion. Brownian models step exactly;
/// OU and CIR (as sqrt(X)) use Euler-Maruyama. Reset epochs are placed exactly.
/// Throws ConfigError if more than 1% of paths reach t_max.
McEstimate simulate_tau(const ProblemSpec& spec, double r, const SimConfig& cfg = {});

/// As simulate_tau for OU and CIR models but with the exact Gaussian OU
/// transition; the bridge test at 0 is exact as well.
McEstimate simulate_ou_exact(const ProblemSpec& spec, double r, const SimConfig& cfg = {});

/// 50 times the analytic mean when finite, else 50 / r, else 1e4.
double default_t_max(const ProblemSpec& spec, double r);

}  // namespace resetfpt

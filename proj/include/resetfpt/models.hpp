#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>

namespace resetfpt {

/// Increasing map v with v(0) = 0 that carries a diffusion onto standard
/// Brownian motion: X(t) = v^-1(B_t + v(x)).
struct MonotoneMap {
    std::string name;
    std::function<double(double)> forward;
    std::function<double(double)> inverse;
    double domain_lo = 0.0;
    double domain_hi = std::numeric_limits<double>::infinity();

    /// SDE coefficients of the conjugated diffusion in its natural
    /// coordinates. Optional; only the Monte Carlo oracle uses them.
    std::function<double(double)> drift;
    std::function<double(double)> diffusion;

    bool contains(double x) const { return x >= domain_lo && x <= domain_hi; }

    /// v(x) = 2 sqrt(x) on [0, inf); dX = dt/4 + sqrt(X) dB.
    static MonotoneMap feller();
    /// v(x) = 2 arcsin(sqrt(x)) on [0, 1]; dX = (1/4 - X/2) dt + sqrt(X(1-X)) dB.
    static MonotoneMap wright_fisher();
};

/// X(t) = x + eta t + B_t.
struct DriftedBM {
    double eta = 0.0;
};

/// dX = -mu X dt + sigma dB.
struct OrnsteinUhlenbeck {
    double mu = 1.0;
    double sigma = 1.0;
};

/// dX = (sigma^2 - 2 mu X) dt + 2 sigma sqrt(X) dB, so that sqrt(X) is OU(mu, sigma).
struct Cir {
    double mu = 1.0;
    double sigma = 1.0;
};

struct Conjugated {
    MonotoneMap map;
};

using ModelSpec = std::variant<DriftedBM, OrnsteinUhlenbeck, Cir, Conjugated>;

enum class ProblemKind { Fpt, Fet };

/// First passage through 0 (Fpt) or first exit from (0, b) (Fet) of the
/// diffusion started at x and reset to x_r at Poisson epochs.
struct ProblemSpec {
    ProblemKind kind = ProblemKind::Fpt;
    double x = 1.0;
    double x_r = 1.0;
    double b = std::numeric_limits<double>::infinity();
    ModelSpec model = DriftedBM{};
};

/// Returns `spec` unchanged when every invariant holds; throws ValidationError
/// naming the first violated one otherwise.
///
/// Starting points on the absorbing boundary (x = 0, or x = b for exits) are
/// accepted: the passage time is then identically zero.
ProblemSpec validate(const ProblemSpec& spec);

std::string model_name(const ModelSpec& model);
std::string kind_name(ProblemKind kind);

inline bool is_fet(const ProblemSpec& spec) { return spec.kind == ProblemKind::Fet; }

/// True when `position` lies on the absorbing boundary of `spec`.
bool on_boundary(const ProblemSpec& spec, double position);

}  // namespace resetfpt

#include "resetfpt/mc_oracle.hpp"

#include "resetfpt/errors.hpp"
#include "resetfpt/parallel.hpp"
#include "resetfpt/reset_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace resetfpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBlock = 4096;
constexpr double kUnreliableCensoring = 1e-4;
constexpr double kMaxCensoring = 1e-2;
// Bridge crossing probabilities below exp(-40) are skipped.
constexpr double kBridgeCutoff = 40.0;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

struct Domain {
    double lo = 0.0;
    double hi = kInf;
};

// Exact Brownian steps with drift eta and unit diffusion.
struct BrownianStepper {
    double eta = 0.0;
    double step(double y, double h, Rng& rng, std::normal_distribution<double>& z) const {
        return y + eta * h + std::sqrt(h) * z(rng);
    }
    double bridge_exponent(double da, double dc, double h, double, bool) const {
        return 2.0 * da * dc / h;
    }
};

struct OuEulerStepper {
    double mu = 1.0;
    double sigma = 1.0;
    double step(double y, double h, Rng& rng, std::normal_distribution<double>& z) const {
        return y - mu * y * h + sigma * std::sqrt(h) * z(rng);
    }
    double bridge_exponent(double da, double dc, double h, double, bool) const {
        return 2.0 * da * dc / (sigma * sigma * h);
    }
};

// X(t+h) = X(t) e^{-mu h} + sd(h) Z. Crossing 0 within the step is the event
// that X_a + B(rho(s)) hits 0 for s <= h, rho(s) = sigma^2 (e^{2 mu s} - 1)/(2 mu),
// with endpoint X_c e^{mu h}.
struct OuExactStepper {
    double mu = 1.0;
    double sigma = 1.0;
    double step(double y, double h, Rng& rng, std::normal_distribution<double>& z) const {
        const double decay = std::exp(-mu * h);
        const double sd = sigma * std::sqrt(-std::expm1(-2.0 * mu * h) / (2.0 * mu));
        return y * decay + sd * z(rng);
    }
    double bridge_exponent(double da, double dc, double h, double, bool upper) const {
        if (upper) return 2.0 * da * dc / (sigma * sigma * h);
        const double rho = sigma * sigma * std::expm1(2.0 * mu * h) / (2.0 * mu);
        return 2.0 * da * dc * std::exp(mu * h) / rho;
    }
};

struct NaturalStepper {
    const MonotoneMap* map = nullptr;
    double step(double y, double h, Rng& rng, std::normal_distribution<double>& z) const {
        return y + map->drift(y) * h + map->diffusion(y) * std::sqrt(h) * z(rng);
    }
    // The diffusion coefficient degenerates at the boundary, where a
    // constant-coefficient bridge overstates crossings; no bridge test.
    double bridge_exponent(double, double, double, double, bool) const { return kInf; }
};

struct PathSetup {
    double y0 = 0.0;
    double y_reset = 0.0;
    Domain domain;
};

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        n += 1.0;
        const double d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        if (n == 0.0) {
            *this = o;
            return;
        }
        const double total = n + o.n;
        const double d = o.mean - mean;
        mean += d * o.n / total;
        m2 += o.m2 + d * d * n * o.n / total;
        n = total;
    }
    double variance() const { return n > 1.0 ? m2 / (n - 1.0) : 0.0; }
};

struct BlockStats {
    Moments tau;
    Moments tau2;
    Moments lt;
    std::size_t censored = 0;
};

template <class Stepper>
double simulate_path(const Stepper& stepper, const PathSetup& setup, double r,
                     const SimConfig& cfg, double t_max, Rng& rng, bool& censored) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::exponential_distribution<double> clock(r > 0.0 ? r : 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const Domain& dom = setup.domain;
    const bool two_sided = std::isfinite(dom.hi);

    double t = 0.0;
    double y = setup.y0;
    double next_reset = r > 0.0 ? clock(rng) : kInf;
    censored = false;
    while (true) {
        const double h = std::min({cfg.dt, next_reset - t, t_max - t});
        const double yc = stepper.step(y, h, rng, normal);
        if (yc <= dom.lo || (two_sided && yc >= dom.hi)) return t + 0.5 * h;
        if (cfg.bridge_correction) {
            double survive = 1.0;
            const double e_lo = stepper.bridge_exponent(y - dom.lo, yc - dom.lo, h, y, false);
            if (e_lo < kBridgeCutoff) survive *= -std::expm1(-e_lo);
            if (two_sided) {
                const double e_hi = stepper.bridge_exponent(dom.hi - y, dom.hi - yc, h, y, true);
                if (e_hi < kBridgeCutoff) survive *= -std::expm1(-e_hi);
            }
            if (survive < 1.0 && uniform(rng) >= survive) return t + 0.5 * h;
        }
        y = yc;
        if (h == t_max - t) {
            censored = true;
            return t_max;
        }
        if (h == next_reset - t) {
            t = next_reset;
            y = setup.y_reset;
            next_reset = t + clock(rng);
        } else {
            t += h;
        }
    }
}

template <class Stepper>
McEstimate run(const Stepper& stepper, const PathSetup& setup, const ProblemSpec& spec, double r,
               const SimConfig& cfg, const char* integrator) {
    if (!(cfg.dt > 0.0) || cfg.n_paths < 1) {
        throw ConfigError("simulation needs dt > 0 and at least one path");
    }
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("resetting rate must be >= 0");
    const double t_max = cfg.t_max > 0.0 ? cfg.t_max : default_t_max(spec, r);
    if (t_max < 100.0 * cfg.dt) throw ConfigError("t_max must be at least 100 dt");
    if (cfg.lam && !(*cfg.lam > 0.0)) throw ConfigError("lam must be positive");

    const bool at_boundary = on_boundary(spec, spec.x);
    const std::size_t n_blocks = (cfg.n_paths + kBlock - 1) / kBlock;
    std::vector<BlockStats> blocks(n_blocks);
    parallel_for(n_blocks, [&](std::size_t blk) {
        BlockStats& s = blocks[blk];
        const std::size_t end = std::min(cfg.n_paths, (blk + 1) * kBlock);
        for (std::size_t i = blk * kBlock; i < end; ++i) {
            Rng rng(splitmix64(cfg.seed ^ splitmix64(i)));
            bool censored = false;
            const double tau =
                at_boundary ? 0.0 : simulate_path(stepper, setup, r, cfg, t_max, rng, censored);
            if (censored) ++s.censored;
            s.tau.add(tau);
            s.tau2.add(tau * tau);
            if (cfg.lam) s.lt.add(std::exp(-*cfg.lam * tau));
        }
    });

    BlockStats total;
    for (const auto& b : blocks) {
        total.tau.merge(b.tau);
        total.tau2.merge(b.tau2);
        total.lt.merge(b.lt);
        total.censored += b.censored;
    }

    McEstimate out;
    const double n = static_cast<double>(cfg.n_paths);
    out.n_paths = cfg.n_paths;
    out.mean = total.tau.mean;
    out.std_err = std::sqrt(total.tau.variance() / n);
    out.second_moment = total.tau2.mean;
    out.second_std_err = std::sqrt(total.tau2.variance() / n);
    out.censored_fraction = static_cast<double>(total.censored) / n;
    out.reliable = out.censored_fraction <= kUnreliableCensoring;
    out.dt = cfg.dt;
    out.t_max = t_max;
    out.bridge_correction = cfg.bridge_correction;
    out.integrator = integrator;
    if (cfg.lam) {
        out.lt = total.lt.mean;
        out.lt_std_err = std::sqrt(total.lt.variance() / n);
    }
    if (out.censored_fraction > kMaxCensoring) {
        throw ConfigError("censored fraction " + std::to_string(out.censored_fraction) +
                          " exceeds 1e-2; increase t_max");
    }
    return out;
}

Domain sim_domain(const ProblemSpec& spec, double (*transform)(double)) {
    Domain d;
    if (is_fet(spec)) d.hi = transform(spec.b);
    return d;
}

double identity(double v) { return v; }
double square_root(double v) { return std::sqrt(v); }

}  // namespace

double default_t_max(const ProblemSpec& spec, double r) {
    double mean = kInf;
    try {
        mean = mean_with_reset({spec, r, std::nullopt});
    } catch (const Error&) {
        mean = kInf;
    }
    if (std::isfinite(mean) && mean > 0.0) return 50.0 * mean;
    if (r > 0.0) return 50.0 / r;
    return 1e4;
}

McEstimate simulate_tau(const ProblemSpec& input, double r, const SimConfig& cfg) {
    const ProblemSpec spec = validate(input);
    struct Visitor {
        const ProblemSpec& spec;
        double r;
        const SimConfig& cfg;

        McEstimate operator()(const DriftedBM& m) const {
            const PathSetup setup{spec.x, spec.x_r, sim_domain(spec, identity)};
            return run(BrownianStepper{m.eta}, setup, spec, r, cfg, "brownian-exact");
        }
        McEstimate operator()(const OrnsteinUhlenbeck& m) const {
            const PathSetup setup{spec.x, spec.x_r, sim_domain(spec, identity)};
            return run(OuEulerStepper{m.mu, m.sigma}, setup, spec, r, cfg, "euler-maruyama");
        }
        McEstimate operator()(const Cir& m) const {
            const PathSetup setup{std::sqrt(spec.x), std::sqrt(spec.x_r),
                                  sim_domain(spec, square_root)};
            return run(OuEulerStepper{m.mu, m.sigma}, setup, spec, r, cfg, "euler-maruyama-sqrt");
        }
        McEstimate operator()(const Conjugated& m) const {
            if (cfg.natural_coordinates) {
                if (!m.map.drift || !m.map.diffusion) {
                    throw ConfigError("map '" + m.map.name + "' has no SDE coefficients");
                }
                const PathSetup setup{spec.x, spec.x_r, sim_domain(spec, identity)};
                return run(NaturalStepper{&m.map}, setup, spec, r, cfg, "euler-maruyama-natural");
            }
            PathSetup setup{m.map.forward(spec.x), m.map.forward(spec.x_r), {}};
            if (is_fet(spec)) setup.domain.hi = m.map.forward(spec.b);
            return run(BrownianStepper{0.0}, setup, spec, r, cfg, "brownian-exact-v");
        }
    };
    return std::visit(Visitor{spec, r, cfg}, spec.model);
}

McEstimate simulate_ou_exact(const ProblemSpec& input, double r, const SimConfig& cfg) {
    const ProblemSpec spec = validate(input);
    if (const auto* m = std::get_if<OrnsteinUhlenbeck>(&spec.model)) {
        const PathSetup setup{spec.x, spec.x_r, sim_domain(spec, identity)};
        return run(OuExactStepper{m->mu, m->sigma}, setup, spec, r, cfg, "ou-exact");
    }
    if (const auto* m = std::get_if<Cir>(&spec.model)) {
        const PathSetup setup{std::sqrt(spec.x), std::sqrt(spec.x_r), sim_domain(spec, square_root)};
        return run(OuExactStepper{m->mu, m->sigma}, setup, spec, r, cfg, "ou-exact-sqrt");
    }
    throw ConfigError("exact OU simulation requires an OU or CIR model");
}

}  // namespace resetfpt

#include <resetfpt/errors.hpp>
#include <resetfpt/lt_core.hpp>
#include <resetfpt/mc_oracle.hpp>
#include <resetfpt/reset_moments.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

using namespace resetfpt;

// Path counts here are kept small so the suite runs in seconds; the 1e5-path
// concordance checks live in the acceptance binary.

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ProblemSpec fpt(ModelSpec model, double x, double x_r) { return {ProblemKind::Fpt, x, x_r, kInf, std::move(model)}; }

ProblemSpec fet(ModelSpec model, double x, double x_r, double b) {
    return {ProblemKind::Fet, x, x_r, b, std::move(model)};
}

SimConfig config(double dt, std::size_t paths, std::uint64_t seed = 7) {
    SimConfig c;
    c.dt = dt;
    c.n_paths = paths;
    c.seed = seed;
    return c;
}

double z_score(const McEstimate& e, double want) { return (e.mean - want) / e.std_err; }

}  // namespace

TEST_CASE("no-reset exit and passage means", "[mc_oracle]") {
    const auto exit = simulate_tau(fet(DriftedBM{0.0}, 0.5, 0.2, 1.0), 0.0, config(1e-3, 20000));
    CHECK(std::abs(z_score(exit, 0.25)) < 3.0);
    CHECK(exit.reliable);
    CHECK(exit.integrator == "brownian-exact");

    const auto drift = simulate_tau(fpt(DriftedBM{-1.0}, 2.0, 2.0), 0.0, config(2e-3, 20000));
    CHECK(std::abs(z_score(drift, 2.0)) < 3.0);
}

TEST_CASE("Brownian passage with resetting", "[mc_oracle]") {
    const auto spec = fpt(DriftedBM{0.0}, 1.0, 1.0);
    const auto e = simulate_tau(spec, 1.269, config(4e-3, 20000));
    const double mean = mean_with_reset({spec, 1.269, std::nullopt});
    CHECK(std::abs(z_score(e, mean)) < 3.0);
    const double second = second_moment_with_reset({spec, 1.269, std::nullopt});
    CHECK(std::abs(e.second_moment - second) < 3.0 * e.second_std_err);
}

TEST_CASE("standard error is the sample deviation over root n", "[mc_oracle]") {
    const auto e = simulate_tau(fpt(DriftedBM{0.0}, 1.0, 1.0), 1.0, config(4e-3, 5000));
    const double n = static_cast<double>(e.n_paths);
    const double sample_var = (e.second_moment - e.mean * e.mean) * n / (n - 1.0);
    CHECK(e.n_paths == 5000);
    CHECK(e.std_err == Catch::Approx(std::sqrt(sample_var / n)).epsilon(1e-8));
}

TEST_CASE("halving the step stays within sampling error", "[mc_oracle]") {
    const auto spec = fpt(DriftedBM{0.0}, 1.0, 1.0);
    const auto coarse = simulate_tau(spec, 1.0, config(4e-3, 20000, 1));
    const auto fine = simulate_tau(spec, 1.0, config(2e-3, 20000, 2));
    const double combined = std::hypot(coarse.std_err, fine.std_err);
    CHECK(std::abs(coarse.mean - fine.mean) < 2.0 * combined);
}

TEST_CASE("bridge test removes the missed-crossing bias", "[mc_oracle]") {
    const auto spec = fet(DriftedBM{0.0}, 0.5, 0.2, 1.0);
    const double want = mean_with_reset({spec, 45.0, std::nullopt});
    auto cfg = config(1e-3, 20000);
    const auto with = simulate_tau(spec, 45.0, cfg);
    cfg.bridge_correction = false;
    const auto without = simulate_tau(spec, 45.0, cfg);
    CHECK(with.bridge_correction);
    CHECK_FALSE(without.bridge_correction);
    CHECK(std::abs(z_score(with, want)) < 3.0);
    // Crossings between grid points go unseen, so the plain estimate is late.
    CHECK(z_score(without, want) > 3.0);
}

TEST_CASE("identical seeds give identical estimates", "[mc_oracle]") {
    const auto spec = fpt(OrnsteinUhlenbeck{1.0, 1.0}, 0.5, 0.5);
    const auto a = simulate_tau(spec, 3.1, config(2e-3, 6000, 99));
    ::setenv("RESET_FPT_THREADS", "1", 1);
    const auto b = simulate_tau(spec, 3.1, config(2e-3, 6000, 99));
    ::unsetenv("RESET_FPT_THREADS");
    CHECK(a.mean == b.mean);
    CHECK(a.std_err == b.std_err);
    CHECK(a.second_moment == b.second_moment);
    const auto c = simulate_tau(spec, 3.1, config(2e-3, 6000, 100));
    CHECK(c.mean != a.mean);
}

TEST_CASE("exact OU transitions", "[mc_oracle]") {
    const auto start = fpt(OrnsteinUhlenbeck{1.0, 1.0}, 1.0, 1.0);
    const auto base = simulate_ou_exact(start, 0.0, config(1e-3, 20000));
    CHECK(base.integrator == "ou-exact");
    CHECK(std::abs(z_score(base, baseline_no_reset(start))) < 3.0);

    const auto reset = fpt(OrnsteinUhlenbeck{1.0, 1.0}, 0.5, 0.5);
    const auto e = simulate_ou_exact(reset, 3.1, config(1e-3, 20000));
    CHECK(std::abs(z_score(e, mean_with_reset({reset, 3.1, std::nullopt}))) < 3.0);

    CHECK_THROWS_AS(simulate_ou_exact(fpt(DriftedBM{0.0}, 1.0, 1.0), 1.0, config(1e-3, 100)), ConfigError);
}

TEST_CASE("CIR runs as the square-root OU", "[mc_oracle]") {
    const auto cir = simulate_ou_exact(fpt(Cir{1.0, 1.0}, 1.0, 1.0), 1.0, config(1e-3, 20000, 5));
    const auto ou = simulate_ou_exact(fpt(OrnsteinUhlenbeck{1.0, 1.0}, 1.0, 1.0), 1.0, config(1e-3, 20000, 6));
    CHECK(cir.integrator == "ou-exact-sqrt");
    CHECK(std::abs(cir.mean - ou.mean) < 3.0 * std::hypot(cir.std_err, ou.std_err));

    const auto euler = simulate_tau(fpt(Cir{1.0, 1.0}, 1.0, 1.0), 1.0, config(1e-3, 5000));
    CHECK(euler.integrator == "euler-maruyama-sqrt");
    CHECK(std::isfinite(euler.mean));
}

TEST_CASE("transform estimate for the OU exit problem", "[mc_oracle]") {
    const auto spec = fet(OrnsteinUhlenbeck{1.0, 1.0}, 0.5, 1.0, 2.0);
    auto cfg = config(1e-3, 20000);
    cfg.lam = 1.0;
    const auto e = simulate_ou_exact(spec, 0.0, cfg);
    REQUIRE(e.lt);
    REQUIRE(e.lt_std_err);
    CHECK(std::abs(*e.lt - m0_fet_ou(1.0, 1.0, 0.5, 2.0, 1.0)) < 3.0 * *e.lt_std_err);
}

TEST_CASE("conjugated models", "[mc_oracle]") {
    const auto wf = fet(Conjugated{MonotoneMap::wright_fisher()}, 0.5, 0.1, 1.0);
    const auto e = simulate_tau(wf, 5.0, config(5e-4, 20000));
    CHECK(e.integrator == "brownian-exact-v");
    CHECK(std::abs(z_score(e, mean_with_reset({wf, 5.0, std::nullopt}))) < 3.0);
}

TEST_CASE("configuration errors", "[mc_oracle][errors]") {
    const auto spec = fpt(DriftedBM{0.0}, 1.0, 1.0);
    CHECK_THROWS_AS(simulate_tau(spec, 1.0, config(0.0, 100)), ConfigError);
    CHECK_THROWS_AS(simulate_tau(spec, 1.0, config(1e-3, 0)), ConfigError);
    CHECK_THROWS_AS(simulate_tau(spec, -1.0, config(1e-3, 100)), ConfigError);
    auto short_run = config(1e-3, 2000);
    short_run.t_max = 0.05;
    CHECK_THROWS_AS(simulate_tau(spec, 1.0, short_run), ConfigError);
    short_run.t_max = 0.1;
    CHECK_THROWS_AS(simulate_tau(spec, 1.0, short_run), ConfigError);
}

TEST_CASE("default time cap", "[mc_oracle]") {
    const auto spec = fpt(DriftedBM{0.0}, 1.0, 1.0);
    CHECK(default_t_max(spec, 1.269) == Catch::Approx(50.0 * mean_with_reset({spec, 1.269, std::nullopt})));
    CHECK(default_t_max(spec, 0.0) == 1e4);
}

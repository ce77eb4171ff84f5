#include <resetfpt/errors.hpp>
#include <resetfpt/reset_moments.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace resetfpt;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

ProblemSpec fpt(ModelSpec model, double x, double x_r) { return {ProblemKind::Fpt, x, x_r, kInf, std::move(model)}; }

ProblemSpec fet(ModelSpec model, double x, double x_r, double b) {
    return {ProblemKind::Fet, x, x_r, b, std::move(model)};
}

std::vector<ProblemSpec> families() {
    return {fpt(DriftedBM{0.0}, 1.0, 1.0),
            fpt(DriftedBM{-0.4}, 0.6, 1.2),
            fpt(DriftedBM{0.9}, 1.5, 0.7),
            fpt(OrnsteinUhlenbeck{1.0, 1.0}, 0.8, 0.5),
            fpt(Cir{0.7, 1.3}, 1.1, 0.6),
            fpt(Conjugated{MonotoneMap::feller()}, 1.0, 1.0),
            fpt(Conjugated{MonotoneMap::wright_fisher()}, 0.4, 0.3),
            fet(DriftedBM{0.0}, 0.5, 0.2, 1.0),
            fet(DriftedBM{-1.5}, 1.2, 0.9, 2.0),
            fet(OrnsteinUhlenbeck{1.0, 1.0}, 0.5, 0.5, 2.0),
            fet(Cir{1.0, 1.0}, 0.5, 1.5, 3.0),
            fet(Conjugated{MonotoneMap::feller()}, 1.0, 2.0, 4.0),
            fet(Conjugated{MonotoneMap::wright_fisher()}, 0.3, 0.6, 1.0)};
}

/// E[tau^2] = -2 d/dlam Q̂_r(x, lam) at lam = 0, by a one-sided second-order
/// difference anchored on the mean. Shares no derivative code with the library.
double second_moment_from_survival(const ProblemSpec& spec, double r) {
    const double h = 1e-4 / (1.0 + mean_with_reset({spec, r, std::nullopt}));
    const double q0 = mean_with_reset({spec, r, std::nullopt});
    const double q1 = survival_lt_with_reset({spec, r, h});
    const double q2 = survival_lt_with_reset({spec, r, 2.0 * h});
    const double slope = (4.0 * q1 - q2 - 3.0 * q0) / (2.0 * h);
    return -2.0 * slope;
}

}  // namespace

TEST_CASE("transform with resetting", "[reset_moments]") {
    const ProblemSpec s = fpt(DriftedBM{0.0}, 1.0, 1.0);
    CHECK(lt_with_reset({s, 0.0, 0.8}) == lt_no_reset(s, 1.0, 0.8).m0);

    // x = x_r: M_r = (lam + r) M_0 / (lam + r M_0) with M_0 = exp(-sqrt(2 (lam + r))).
    const double lam = 1.0, r = 2.0;
    const double m0 = std::exp(-std::sqrt(2.0 * (lam + r)));
    CHECK(rel_err(lt_with_reset({s, r, lam}), (lam + r) * m0 / (lam + r * m0)) < 1e-14);

    for (const auto& family : families()) {
        ProblemSpec at_zero = family;
        at_zero.x = 0.0;
        CHECK(lt_with_reset({at_zero, 1.7, 0.4}) == 1.0);
    }
    CHECK_THROWS_AS(lt_with_reset({s, 1.0, std::nullopt}), ValidationError);
    CHECK_THROWS_AS(lt_with_reset({s, -1.0, 1.0}), DomainError);
}

TEST_CASE("mean at tabulated optima", "[reset_moments]") {
    CHECK(rel_err(mean_with_reset({fpt(DriftedBM{0.0}, 1.0, 1.0), 1.269, std::nullopt}), 3.088) < 1e-3);
    CHECK(rel_err(mean_with_reset({fet(DriftedBM{0.0}, 0.5, 0.2, 1.0), 45.009, std::nullopt}), 0.1451) < 1e-3);
    CHECK(rel_err(mean_with_reset({fpt(OrnsteinUhlenbeck{1.0, 1.0}, 0.5, 0.5), 3.10, std::nullopt}), 0.59) <
          1e-2);
    CHECK(mean_with_reset({fpt(DriftedBM{0.0}, 0.0, 1.0), 5.0, std::nullopt}) == 0.0);
}

TEST_CASE("transform and survival transform are consistent", "[reset_moments][property]") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> log_u(std::log(0.05), std::log(20.0));
    for (const auto& family : families()) {
        INFO(model_name(family.model) << " " << kind_name(family.kind));
        for (int i = 0; i < 100; ++i) {
            const double r = std::exp(log_u(rng));
            const double lam = std::exp(log_u(rng));
            const double m = lt_with_reset({family, r, lam});
            const double q = survival_lt_with_reset({family, r, lam});
            INFO("r = " << r << ", lam = " << lam);
            CHECK(m > 0.0);
            CHECK(m <= 1.0);
            // Summed rather than subtracted: 1 - lam q cancels when m is tiny.
            CHECK(std::abs(lam * q + m - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("survival transform at small lambda tends to the mean", "[reset_moments]") {
    for (const auto& family : families()) {
        INFO(model_name(family.model) << " " << kind_name(family.kind));
        const double r = 1.3;
        const double mean = mean_with_reset({family, r, std::nullopt});
        const double q1 = survival_lt_with_reset({family, r, 1e-7});
        const double q2 = survival_lt_with_reset({family, r, 2e-7});
        CHECK(rel_err(2.0 * q1 - q2, mean) < 1e-6);
    }
}

TEST_CASE("reset at the start", "[reset_moments]") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (const ModelSpec& model : {ModelSpec{DriftedBM{0.0}}, ModelSpec{DriftedBM{-0.6}},
                                   ModelSpec{OrnsteinUhlenbeck{1.0, 1.0}}, ModelSpec{Cir{0.5, 1.0}},
                                   ModelSpec{Conjugated{MonotoneMap::feller()}}}) {
        for (int i = 0; i < 20; ++i) {
            const double x = u(rng), r = u(rng);
            const ProblemSpec s = fpt(model, x, x);
            const double m0 = lt_no_reset(s, x, r).m0;
            CHECK(rel_err(mean_with_reset({s, r, std::nullopt}), (1.0 / m0 - 1.0) / r) < 1e-12);
        }
    }
}

TEST_CASE("Brownian mean grows with the reset position", "[reset_moments][property]") {
    for (double x : {0.3, 1.0, 2.5}) {
        double prev = 0.0;
        for (double x_r = 0.1; x_r < 4.0; x_r += 0.15) {
            const double mean = mean_with_reset({fpt(DriftedBM{0.0}, x, x_r), 0.8, std::nullopt});
            CHECK(mean > prev);
            prev = mean;
        }
    }
}

TEST_CASE("Brownian exit mean is symmetric about b/2", "[reset_moments][property]") {
    for (double x : {0.05, 0.2, 0.37, 0.5}) {
        for (double r : {0.5, 12.0, 45.0}) {
            const double a = mean_with_reset({fet(DriftedBM{0.0}, x, 0.2, 1.0), r, std::nullopt});
            const double b = mean_with_reset({fet(DriftedBM{0.0}, 1.0 - x, 0.2, 1.0), r, std::nullopt});
            CHECK(rel_err(a, b) < 1e-10);
        }
    }
}

TEST_CASE("Brownian passage mean blows up at both rate limits", "[reset_moments]") {
    const ProblemSpec s = fpt(DriftedBM{0.0}, 1.0, 1.0);
    const double mid = mean_with_reset({s, 1.0, std::nullopt});
    CHECK(mean_with_reset({s, 1e-6, std::nullopt}) > mid);
    CHECK(mean_with_reset({s, 1e6, std::nullopt}) > mid);
    CHECK(mean_with_reset({s, 1e6, std::nullopt}) == kInf);
    CHECK(mean_with_reset({s, 0.0, std::nullopt}) == kInf);
}

TEST_CASE("second moment", "[reset_moments]") {
    // Closed form at x = x_r for Brownian motion, k = x sqrt(2 r):
    // E[tau^2] = 2 e^k (e^k - 1 - k/2) / r^2.
    for (double x : {0.5, 1.0, 2.0}) {
        for (double r : {0.3, 1.269, 4.0}) {
            const double k = x * std::sqrt(2.0 * r);
            const double want = 2.0 * std::exp(k) * (std::expm1(k) - 0.5 * k) / (r * r);
            CHECK(rel_err(second_moment_with_reset({fpt(DriftedBM{0.0}, x, x), r, std::nullopt}), want) < 1e-12);
        }
    }
    CHECK_THROWS_AS(second_moment_with_reset({fpt(DriftedBM{0.0}, 1.0, 1.0), 1e-9, std::nullopt}), DomainError);
    CHECK(second_moment_with_reset({fpt(DriftedBM{0.0}, 0.0, 1.0), 1.0, std::nullopt}) == 0.0);
}

TEST_CASE("second moment through the survival transform", "[reset_moments][property]") {
    for (const auto& family : families()) {
        for (double r : {0.4, 2.0, 9.0}) {
            INFO(model_name(family.model) << " " << kind_name(family.kind) << " r = " << r);
            const double direct = second_moment_with_reset({family, r, std::nullopt});
            CHECK(rel_err(second_moment_from_survival(family, r), direct) < 1e-6);
        }
    }
}

TEST_CASE("second moment dominates the squared mean", "[reset_moments][property]") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> log_r(std::log(0.01), std::log(50.0));
    for (const auto& family : families()) {
        INFO(model_name(family.model) << " " << kind_name(family.kind));
        for (int i = 0; i < 100; ++i) {
            const double r = std::exp(log_r(rng));
            const MomentResult m = moments_with_reset({family, r, std::nullopt});
            REQUIRE(m.second);
            REQUIRE(m.variance);
            CHECK(*m.second >= m.mean * m.mean);
            CHECK(*m.variance >= 0.0);
        }
    }
}

TEST_CASE("analytic and finite-difference second moments agree", "[reset_moments]") {
    for (const auto& family : families()) {
        for (double r : {0.05, 1.0, 20.0}) {
            INFO(model_name(family.model) << " " << kind_name(family.kind) << " r = " << r);
            const double a = second_moment_with_reset({family, r, std::nullopt}, DerivativeMode::Automatic);
            const double f =
                second_moment_with_reset({family, r, std::nullopt}, DerivativeMode::FiniteDifference);
            CHECK(rel_err(f, a) < 1e-6);
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "relay/waterfill.hpp"

using relay::classic_wf;
using relay::invert_rate_curve;
using relay::rate_curve;
using relay::weighted_wf;
using relay::WfResult;

namespace {

std::vector<double> log_uniform_gains(std::mt19937& rng, int n, double lo = 1.0, double hi = 1e4) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    std::vector<double> g(static_cast<size_t>(n));
    for (double& v : g) {
        v = std::exp(u(rng));
    }
    return g;
}

} // namespace

TEST_CASE("weighted water-filling matches the two-channel closed form") {
    // KKT by hand: (L - 1/10) + (L - 1/2) = 1 -> L = 0.8
    const std::vector<double> gains{10.0, 2.0};
    const std::vector<double> weights{1.0, 1.0};
    const WfResult res = weighted_wf(gains, weights, 1.0);
    CHECK(res.water_level == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(res.powers[0] == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(res.powers[1] == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("weighted water-filling drops slots below the cutoff") {
    // small budget: only the strong channel is active, L - 1/10 = 0.1
    const std::vector<double> gains{10.0, 2.0};
    const std::vector<double> weights{1.0, 1.0};
    const WfResult res = weighted_wf(gains, weights, 0.1);
    CHECK(res.water_level == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(res.powers[0] == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(res.powers[1] == 0.0);
}

TEST_CASE("weighted water-filling with unequal weights") {
    // (2L - 1) + (L - 1) = 3 -> L = 5/3, powers 7/3 and 2/3
    const std::vector<double> gains{1.0, 1.0};
    const std::vector<double> weights{2.0, 1.0};
    const WfResult res = weighted_wf(gains, weights, 3.0);
    CHECK(res.water_level == doctest::Approx(5.0 / 3.0).epsilon(1e-10));
    CHECK(res.powers[0] == doctest::Approx(7.0 / 3.0).epsilon(1e-10));
    CHECK(res.powers[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("zero budget allocates nothing") {
    const std::vector<double> gains{3.0, 0.2, 11.0};
    const std::vector<double> weights{0.5, 1.0, 0.0};
    const WfResult res = weighted_wf(gains, weights, 0.0);
    for (const double p : res.powers) {
        CHECK(p == 0.0);
    }
    for (const double r : res.rates) {
        CHECK(r == 0.0);
    }
}

TEST_CASE("positive budget with all-zero weights is rejected") {
    const std::vector<double> gains{1.0, 2.0};
    const std::vector<double> weights{0.0, 0.0};
    CHECK_THROWS_AS(weighted_wf(gains, weights, 1.0), relay::SolverError);
    try {
        weighted_wf(gains, weights, 1.0);
    } catch (const relay::SolverError& err) {
        CHECK(err.code() == relay::ErrorCode::degenerate_weights);
    }
}

TEST_CASE("zero-weight slots never receive power") {
    const std::vector<double> gains{5.0, 50.0, 0.5};
    const std::vector<double> weights{1.0, 0.0, 2.0};
    const WfResult res = weighted_wf(gains, weights, 4.0);
    CHECK(res.powers[1] == 0.0);
    CHECK(res.total_power() == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("classic water-filling examples") {
    SUBCASE("two channels") {
        const std::vector<double> gains{10.0, 2.0};
        const WfResult res = classic_wf(gains, 1.0);
        CHECK(res.powers[0] == doctest::Approx(0.7).epsilon(1e-10));
        CHECK(res.powers[1] == doctest::Approx(0.3).epsilon(1e-10));
    }
    SUBCASE("single channel takes the whole budget") {
        const std::vector<double> gains{7.0};
        const WfResult res = classic_wf(gains, 2.5);
        CHECK(res.powers[0] == doctest::Approx(2.5).epsilon(1e-11));
        CHECK(res.rates[0] == doctest::Approx(std::log2(1.0 + 2.5 * 7.0)).epsilon(1e-10));
    }
    SUBCASE("equal gains split evenly") {
        const std::vector<double> gains(5, 3.0);
        const WfResult res = classic_wf(gains, 10.0);
        for (const double p : res.powers) {
            CHECK(p == doctest::Approx(2.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("rate curve on a single channel is log2(1 + E)") {
    const std::vector<double> gains{1.0};
    CHECK(rate_curve(gains, 3.0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rate_curve(gains, 0.0) == 0.0);
}

TEST_CASE("rate curve two-channel value") {
    // level 1.375, rate log2(5.5) + log2(2.75) = log2(15.125)
    const std::vector<double> gains{4.0, 2.0};
    CHECK(rate_curve(gains, 2.0) == doctest::Approx(std::log2(15.125)).epsilon(1e-10));
}

TEST_CASE("rate curve rejects negative budgets") {
    const std::vector<double> gains{1.0};
    CHECK_THROWS_AS(rate_curve(gains, -0.5), relay::SolverError);
}

TEST_CASE("rate curve inversion") {
    SUBCASE("single channel analytic") {
        const std::vector<double> gains{1.0};
        CHECK(invert_rate_curve(gains, 2.0, 10.0) == doctest::Approx(3.0).epsilon(1e-7));
    }
    SUBCASE("zero target") {
        const std::vector<double> gains{4.0, 2.0};
        CHECK(invert_rate_curve(gains, 0.0, 5.0) == 0.0);
    }
    SUBCASE("inverse of the two-channel rate curve") {
        const std::vector<double> gains{4.0, 2.0};
        const double budget = invert_rate_curve(gains, std::log2(15.125), 6.0);
        CHECK(budget == doctest::Approx(2.0).epsilon(1e-7));
    }
    SUBCASE("unreachable target") {
        const std::vector<double> gains{1.0};
        CHECK_THROWS_AS(invert_rate_curve(gains, 10.0, 1.0), relay::SolverError);
        try {
            invert_rate_curve(gains, 10.0, 1.0);
        } catch (const relay::SolverError& err) {
            CHECK(err.code() == relay::ErrorCode::infeasible_target);
        }
    }
}

TEST_CASE("budget conservation and complementary structure on random inputs") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(u01(rng) * 8);
        const std::vector<double> gains = log_uniform_gains(rng, n);
        std::vector<double> weights(static_cast<size_t>(n));
        bool any_positive = false;
        for (double& w : weights) {
            w = u01(rng) < 0.25 ? 0.0 : 0.1 + 3.0 * u01(rng);
            any_positive = any_positive || w > 0.0;
        }
        if (!any_positive) {
            weights[0] = 1.0;
        }
        const double budget = 0.05 + 15.0 * u01(rng);
        const WfResult res = weighted_wf(gains, weights, budget);

        CHECK(res.total_power() == doctest::Approx(budget).epsilon(1e-9));
        for (int i = 0; i < n; ++i) {
            CHECK(res.powers[static_cast<size_t>(i)] >= 0.0);
            if (res.powers[static_cast<size_t>(i)] > 1e-9) {
                // level equation where power is positive
                const double expected = res.water_level * weights[static_cast<size_t>(i)] -
                                        1.0 / gains[static_cast<size_t>(i)];
                CHECK(res.powers[static_cast<size_t>(i)] == doctest::Approx(expected).epsilon(1e-8));
            } else if (weights[static_cast<size_t>(i)] > 0.0) {
                CHECK(res.water_level * weights[static_cast<size_t>(i)] <=
                      1.0 / gains[static_cast<size_t>(i)] + 1e-8 * res.water_level + 1e-12);
            }
        }
    }
}

TEST_CASE("rate curve composed with its inverse is the identity") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(u01(rng) * 6);
        const std::vector<double> gains = log_uniform_gains(rng, n);
        const double cap = 0.5 + 10.0 * u01(rng);
        const double target = rate_curve(gains, cap * u01(rng));
        const double budget = invert_rate_curve(gains, target, cap);
        CHECK(rate_curve(gains, budget) == doctest::Approx(target).epsilon(1e-8));
    }
}

TEST_CASE("monotone weights and gains give monotone rates") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(u01(rng) * 6);
        std::vector<double> gains = log_uniform_gains(rng, n);
        std::vector<double> weights(static_cast<size_t>(n));
        for (double& w : weights) {
            w = 0.1 + u01(rng);
        }
        std::sort(gains.begin(), gains.end(), std::greater<>());
        std::sort(weights.begin(), weights.end(), std::greater<>());
        const WfResult res = weighted_wf(gains, weights, 1.0 + 10.0 * u01(rng));
        for (int i = 0; i + 1 < n; ++i) {
            CHECK(res.rates[static_cast<size_t>(i) + 1] <=
                  res.rates[static_cast<size_t>(i)] + 1e-9);
        }
    }
}

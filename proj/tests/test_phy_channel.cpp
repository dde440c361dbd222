#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "relay/phy_channel.hpp"

using relay::channel_gains;
using relay::generate_trajectory;
using relay::LinkGains;
using relay::PhyParams;
using relay::Trajectory;
using relay::TrajectoryPattern;
using relay::TrajectoryViolation;
using relay::validate_trajectory;

namespace {

PhyParams desk_params() {
    PhyParams p;
    p.distance_m = 2000.0;
    p.altitude_m = 100.0;
    p.gamma0_db = 80.0;
    p.vmax_mps = 50.0;
    p.slot_len_s = 1.0;
    return p;
}

} // namespace

TEST_CASE("static pattern holds position") {
    const PhyParams p = desk_params();
    const Trajectory traj = generate_trajectory(TrajectoryPattern::fixed(1000.0), p, 10);
    REQUIRE(traj.n_slots() == 10);
    for (const double x : traj.x_m) {
        CHECK(x == 1000.0);
    }
}

TEST_CASE("toward_dest ramps at maximum speed") {
    const PhyParams p = desk_params();
    const Trajectory traj = generate_trajectory(TrajectoryPattern::toward_dest(), p, 41);
    REQUIRE(traj.n_slots() == 41);
    for (int n = 0; n < 41; ++n) {
        CHECK(traj.x_m[static_cast<size_t>(n)] == doctest::Approx(50.0 * n).epsilon(1e-12));
    }
    CHECK(validate_trajectory(traj).valid());
}

TEST_CASE("toward_source mirrors toward_dest") {
    const PhyParams p = desk_params();
    const Trajectory traj = generate_trajectory(TrajectoryPattern::toward_source(), p, 41);
    for (int n = 0; n < 41; ++n) {
        CHECK(traj.x_m[static_cast<size_t>(n)] == doctest::Approx(2000.0 - 50.0 * n).epsilon(1e-12));
    }
}

TEST_CASE("surplus hover slots split with the odd remainder at the start") {
    const PhyParams p = desk_params();
    // 40 moves needed, N = 44 -> 3 hover slots: 2 at the start, 1 at the end
    const Trajectory traj = generate_trajectory(TrajectoryPattern::toward_dest(), p, 44);
    CHECK(traj.x_m[0] == 0.0);
    CHECK(traj.x_m[1] == 0.0);
    CHECK(traj.x_m[2] == 0.0);
    CHECK(traj.x_m[3] == doctest::Approx(50.0));
    CHECK(traj.x_m[42] == doctest::Approx(2000.0));
    CHECK(traj.x_m[43] == doctest::Approx(2000.0));
    CHECK(validate_trajectory(traj).valid());
}

TEST_CASE("short horizon travels as far as possible") {
    const PhyParams p = desk_params();
    const Trajectory traj = generate_trajectory(TrajectoryPattern::toward_dest(), p, 5);
    CHECK(traj.x_m.back() == doctest::Approx(200.0));
}

TEST_CASE("cyclic pattern shuttles between the turning points") {
    const PhyParams p = desk_params();
    const Trajectory traj = generate_trajectory(TrajectoryPattern::cyclic(500.0, 1500.0), p, 61);
    CHECK(traj.x_m[0] == 500.0);
    CHECK(traj.x_m[20] == doctest::Approx(1500.0)); // 1000 m at 50 m/slot
    CHECK(traj.x_m[40] == doctest::Approx(500.0));
    CHECK(traj.x_m[60] == doctest::Approx(1500.0));
    CHECK(validate_trajectory(traj).valid());
    for (const double x : traj.x_m) {
        CHECK(x >= 500.0 - 1e-9);
        CHECK(x <= 1500.0 + 1e-9);
    }
}

TEST_CASE("pattern parameter validation") {
    const PhyParams p = desk_params();
    CHECK_THROWS_AS(generate_trajectory(TrajectoryPattern::fixed(-1.0), p, 5), relay::SolverError);
    CHECK_THROWS_AS(generate_trajectory(TrajectoryPattern::fixed(2500.0), p, 5), relay::SolverError);
    CHECK_THROWS_AS(generate_trajectory(TrajectoryPattern::cyclic(900.0, 900.0), p, 5), relay::SolverError);
    CHECK_THROWS_AS(generate_trajectory(TrajectoryPattern::cyclic(1500.0, 500.0), p, 5), relay::SolverError);
    CHECK_THROWS_AS(generate_trajectory(TrajectoryPattern::toward_dest(), p, 1), relay::SolverError);
}

TEST_CASE("trajectory validation reports violations with slot indices") {
    PhyParams p = desk_params();

    Trajectory ok;
    ok.params = p;
    ok.x_m = {0.0, 50.0}; // boundary-exact step
    CHECK(validate_trajectory(ok).valid());

    Trajectory fast;
    fast.params = p;
    fast.x_m = {0.0, 51.0};
    const auto fast_report = validate_trajectory(fast);
    REQUIRE(fast_report.violations.size() == 1);
    CHECK(fast_report.violations[0].type == TrajectoryViolation::Type::speed);
    CHECK(fast_report.violations[0].slot == 1);
    CHECK(fast_report.violations[0].magnitude == doctest::Approx(1.0));

    Trajectory below;
    below.params = p;
    below.x_m = {-1.0, 0.0};
    const auto below_report = validate_trajectory(below);
    REQUIRE(below_report.violations.size() == 1);
    CHECK(below_report.violations[0].type == TrajectoryViolation::Type::below_zero);
    CHECK(below_report.violations[0].slot == 1);
}

TEST_CASE("channel gains from geometry") {
    PhyParams p = desk_params();

    SUBCASE("above the source") {
        Trajectory traj;
        traj.params = p;
        traj.x_m = {0.0, 0.0};
        const LinkGains g = channel_gains(traj);
        CHECK(g.g_sr[0] == doctest::Approx(1e4).epsilon(1e-12)); // 1e8 / 100^2
        CHECK(g.g_rd[0] == doctest::Approx(1e8 / (1e4 + 4e6)).epsilon(1e-12));
    }
    SUBCASE("midpoint is symmetric") {
        Trajectory traj;
        traj.params = p;
        traj.x_m = {1000.0};
        const LinkGains g = channel_gains(traj);
        CHECK(g.g_sr[0] == doctest::Approx(99.00990099009901).epsilon(1e-12));
        CHECK(g.g_rd[0] == g.g_sr[0]);
    }
    SUBCASE("endpoint extremes") {
        Trajectory traj;
        traj.params = p;
        traj.x_m = {2000.0};
        const LinkGains g = channel_gains(traj);
        CHECK(g.g_rd[0] == doctest::Approx(1e8 / 1e4).epsilon(1e-12));
        CHECK(g.g_sr[0] == doctest::Approx(1e8 / (1e4 + 4e6)).epsilon(1e-12));
    }
}

TEST_CASE("mirror symmetry swaps the two hops") {
    const PhyParams p = desk_params();
    const Trajectory traj = generate_trajectory(TrajectoryPattern::cyclic(200.0, 1700.0), p, 37);
    Trajectory mirrored = traj;
    for (double& x : mirrored.x_m) {
        x = p.distance_m - x;
    }
    const LinkGains g = channel_gains(traj);
    const LinkGains gm = channel_gains(mirrored);
    for (int n = 0; n < traj.n_slots(); ++n) {
        CHECK(gm.g_sr[static_cast<size_t>(n)] == doctest::Approx(g.g_rd[static_cast<size_t>(n)]).epsilon(1e-14));
        CHECK(gm.g_rd[static_cast<size_t>(n)] == doctest::Approx(g.g_sr[static_cast<size_t>(n)]).epsilon(1e-14));
    }
}

TEST_CASE("non-decreasing position gives monotone gains") {
    const PhyParams p = desk_params();
    const Trajectory traj = generate_trajectory(TrajectoryPattern::toward_dest(), p, 50);
    const LinkGains g = channel_gains(traj);
    for (int n = 0; n + 1 < traj.n_slots(); ++n) {
        CHECK(g.g_sr[static_cast<size_t>(n) + 1] <= g.g_sr[static_cast<size_t>(n)] + 1e-15);
        CHECK(g.g_rd[static_cast<size_t>(n) + 1] >= g.g_rd[static_cast<size_t>(n)] - 1e-15);
        CHECK(g.g_sr[static_cast<size_t>(n)] > 0.0);
        CHECK(std::isfinite(g.g_sr[static_cast<size_t>(n)]));
    }
}

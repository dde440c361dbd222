#include "relay/phy_channel.hpp"

#include <algorithm>
#include <cmath>

namespace relay {

namespace {

// Relative tolerance absorbing floating-point ramp accumulation.
constexpr double kGeomTol = 1e-9;

// Ramp from 0 toward target at per-slot step v; surplus slots hover at the
// endpoints, split equally with the odd remainder at the start.
std::vector<double> ramp_positions(double target, double v, int n_slots) {
    std::vector<double> x(static_cast<size_t>(n_slots), 0.0);
    if (v <= 0.0 || target <= 0.0) {
        return x;
    }
    const int moves_needed = static_cast<int>(std::ceil(target / v - kGeomTol));
    if (moves_needed > n_slots - 1) {
        // horizon too short to arrive: move as far as possible
        for (int n = 0; n < n_slots; ++n) {
            x[static_cast<size_t>(n)] = std::min(n * v, target);
        }
        return x;
    }
    const int surplus = (n_slots - 1) - moves_needed;
    const int start_hover = (surplus + 1) / 2;
    for (int n = 0; n < n_slots; ++n) {
        const int k = std::clamp(n - start_hover, 0, moves_needed);
        x[static_cast<size_t>(n)] = std::min(k * v, target);
    }
    return x;
}

} // namespace

double PhyParams::gamma0_linear() const {
    return std::pow(10.0, gamma0_db / 10.0);
}

void PhyParams::validate() const {
    if (!(distance_m > 0.0)) {
        throw SolverError(ErrorCode::invalid_parameter, "distance_m must be > 0");
    }
    if (!(altitude_m > 0.0)) {
        throw SolverError(ErrorCode::invalid_parameter, "altitude_m must be > 0");
    }
    if (!(vmax_mps >= 0.0)) {
        throw SolverError(ErrorCode::invalid_parameter, "vmax_mps must be >= 0");
    }
    if (!(slot_len_s > 0.0)) {
        throw SolverError(ErrorCode::invalid_parameter, "slot_len_s must be > 0");
    }
    if (!std::isfinite(gamma0_db)) {
        throw SolverError(ErrorCode::invalid_parameter, "gamma0_db must be finite");
    }
}

TrajectoryPattern TrajectoryPattern::toward_dest() {
    TrajectoryPattern p;
    p.kind = Kind::toward_dest;
    return p;
}

TrajectoryPattern TrajectoryPattern::toward_source() {
    TrajectoryPattern p;
    p.kind = Kind::toward_source;
    return p;
}

TrajectoryPattern TrajectoryPattern::cyclic(double lo_m, double hi_m) {
    TrajectoryPattern p;
    p.kind = Kind::cyclic;
    p.lo_m = lo_m;
    p.hi_m = hi_m;
    return p;
}

TrajectoryPattern TrajectoryPattern::fixed(double x0_m) {
    TrajectoryPattern p;
    p.kind = Kind::fixed;
    p.x0_m = x0_m;
    return p;
}

const char* pattern_kind_name(TrajectoryPattern::Kind kind) {
    switch (kind) {
        case TrajectoryPattern::Kind::toward_dest: return "toward_dest";
        case TrajectoryPattern::Kind::toward_source: return "toward_source";
        case TrajectoryPattern::Kind::cyclic: return "cyclic";
        case TrajectoryPattern::Kind::fixed: return "static";
    }
    return "unknown";
}

Trajectory generate_trajectory(const TrajectoryPattern& pattern, const PhyParams& params, int n_slots) {
    params.validate();
    if (n_slots < 2) {
        throw SolverError(ErrorCode::invalid_parameter, "n_slots must be at least 2");
    }
    const double step = params.max_step_m();
    const double d = params.distance_m;

    Trajectory traj;
    traj.params = params;
    traj.x_m.assign(static_cast<size_t>(n_slots), 0.0);

    switch (pattern.kind) {
        case TrajectoryPattern::Kind::toward_dest:
            traj.x_m = ramp_positions(d, step, n_slots);
            break;
        case TrajectoryPattern::Kind::toward_source: {
            traj.x_m = ramp_positions(d, step, n_slots);
            for (double& x : traj.x_m) {
                x = d - x;
            }
            break;
        }
        case TrajectoryPattern::Kind::cyclic: {
            if (!(pattern.lo_m >= 0.0) || !(pattern.hi_m <= d) || !(pattern.lo_m < pattern.hi_m)) {
                throw SolverError(ErrorCode::invalid_parameter,
                                  "cyclic pattern requires 0 <= lo < hi <= distance");
            }
            const double span = pattern.hi_m - pattern.lo_m;
            for (int n = 0; n < n_slots; ++n) {
                // triangle-wave fold of the distance traveled onto [lo, hi]
                const double travelled = std::fmod(n * step, 2.0 * span);
                traj.x_m[static_cast<size_t>(n)] =
                    pattern.lo_m + (travelled <= span ? travelled : 2.0 * span - travelled);
            }
            break;
        }
        case TrajectoryPattern::Kind::fixed: {
            if (!(pattern.x0_m >= 0.0) || !(pattern.x0_m <= d)) {
                throw SolverError(ErrorCode::invalid_parameter,
                                  "static pattern requires 0 <= x0 <= distance");
            }
            std::fill(traj.x_m.begin(), traj.x_m.end(), pattern.x0_m);
            break;
        }
    }
    return traj;
}

TrajectoryReport validate_trajectory(const Trajectory& traj) {
    TrajectoryReport report;
    const double d = traj.params.distance_m;
    const double step = traj.params.max_step_m();
    const double bound_tol = kGeomTol * std::max(1.0, d);
    const double speed_tol = kGeomTol * std::max(1.0, step);

    for (int n = 0; n < traj.n_slots(); ++n) {
        const double x = traj.x_m[static_cast<size_t>(n)];
        if (x < -bound_tol) {
            report.violations.push_back({TrajectoryViolation::Type::below_zero, n + 1, -x});
        }
        if (x > d + bound_tol) {
            report.violations.push_back({TrajectoryViolation::Type::beyond_distance, n + 1, x - d});
        }
    }
    for (int n = 0; n + 1 < traj.n_slots(); ++n) {
        const double delta = std::abs(traj.x_m[static_cast<size_t>(n) + 1] - traj.x_m[static_cast<size_t>(n)]);
        if (delta > step + speed_tol) {
            report.violations.push_back({TrajectoryViolation::Type::speed, n + 1, delta - step});
        }
    }
    return report;
}

LinkGains channel_gains(const Trajectory& traj) {
    const double gamma0 = traj.params.gamma0_linear();
    const double h2 = traj.params.altitude_m * traj.params.altitude_m;
    const double d = traj.params.distance_m;

    LinkGains gains;
    gains.g_sr.reserve(traj.x_m.size());
    gains.g_rd.reserve(traj.x_m.size());
    for (const double x : traj.x_m) {
        gains.g_sr.push_back(gamma0 / (h2 + x * x));
        gains.g_rd.push_back(gamma0 / (h2 + (d - x) * (d - x)));
    }
    return gains;
}

} // namespace relay

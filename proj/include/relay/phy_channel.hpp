#pragma once

#include <vector>

#include "relay/error.hpp"

namespace relay {

// Geometry and radio parameters shared by every trajectory.
struct PhyParams {
    double distance_m = 2000.0; ///< source-destination separation D
    double altitude_m = 100.0;  ///< relay altitude H
    double gamma0_db = 80.0;    ///< reference SNR at 1 m, in dB
    double vmax_mps = 50.0;     ///< maximum relay ground speed
    double slot_len_s = 1.0;    ///< slot duration

    double gamma0_linear() const;
    /// Maximum admissible per-slot displacement V = vmax * slot_len.
    double max_step_m() const { return vmax_mps * slot_len_s; }
    void validate() const;
};

struct TrajectoryPattern {
    enum class Kind { toward_dest, toward_source, cyclic, fixed };

    Kind kind = Kind::fixed;
    double lo_m = 0.0; ///< cyclic lower turning point
    double hi_m = 0.0; ///< cyclic upper turning point
    double x0_m = 0.0; ///< fixed hover position

    static TrajectoryPattern toward_dest();
    static TrajectoryPattern toward_source();
    static TrajectoryPattern cyclic(double lo_m, double hi_m);
    static TrajectoryPattern fixed(double x0_m);
};

const char* pattern_kind_name(TrajectoryPattern::Kind kind);

// Discretized relay x-positions, one per slot.
struct Trajectory {
    std::vector<double> x_m;
    PhyParams params;

    int n_slots() const { return static_cast<int>(x_m.size()); }
};

struct TrajectoryViolation {
    enum class Type { below_zero, beyond_distance, speed };

    Type type;
    int slot;         ///< 1-based slot (bounds) or step index n of |x[n+1]-x[n]| (speed)
    double magnitude; ///< exceedance in meters
};

struct TrajectoryReport {
    std::vector<TrajectoryViolation> violations;

    bool valid() const { return violations.empty(); }
};

// Per-slot effective SNR coefficients for both hops (linear scale, per unit power).
struct LinkGains {
    std::vector<double> g_sr;
    std::vector<double> g_rd;

    int n_slots() const { return static_cast<int>(g_sr.size()); }
};

/// Builds an N-slot trajectory for the given movement pattern. Unidirectional
/// patterns move at maximum speed; surplus horizon is spent hovering, split
/// equally between start and end point (odd remainder at the start).
Trajectory generate_trajectory(const TrajectoryPattern& pattern, const PhyParams& params, int n_slots);

/// Reports every violated position bound or speed constraint; empty report
/// means the trajectory satisfies all invariants.
TrajectoryReport validate_trajectory(const Trajectory& traj);

/// Converts geometry into per-slot link SNR coefficients. The dB-to-linear
/// conversion of gamma0 happens here, exactly once; all solver math is linear.
LinkGains channel_gains(const Trajectory& traj);

} // namespace relay

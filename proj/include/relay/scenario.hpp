#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "relay/dual_solver.hpp"
#include "relay/phy_channel.hpp"

namespace relay {

// Fully resolved experiment description, loaded from a key = value config.
struct ScenarioConfig {
    PhyParams phy;
    double horizon_s = 0.0;
    int n_slots = 0;
    double avg_power_s_dbm = 10.0;
    double avg_power_r_dbm = 10.0;
    TrajectoryPattern trajectory;
    SolverOptions solver;
    unsigned long seed = 0;

    /// Total source energy E_s = N * 10^((dbm - 30)/10).
    double e_s() const;
    double e_r() const;
    void validate() const;
};

/// Parses the flat INI-style config format ([section] headers, key = value
/// lines, # comments). Unknown sections or keys and malformed values are
/// config_error with the offending location in the message.
ScenarioConfig parse_config(std::istream& in, const std::string& source_name);
ScenarioConfig load_config(const std::string& path);

struct SolveResult {
    ScenarioConfig config;
    Trajectory trajectory;
    LinkGains gains;
    Solution solution;
    double wall_time_s = 0.0; ///< reported on the console, never in the CSV
};

/// Builds the trajectory, derives gains and budgets, and solves.
SolveResult run_solve(const ScenarioConfig& config);

struct SweepPoint {
    std::string scheme;
    double t_s = 0.0;
    int n_slots = 0;
    double objective = 0.0;
    double throughput = 0.0;
    CaseTag case_tag = CaseTag::case3;
    double gap = 0.0;
};

struct SweepResult {
    ScenarioConfig base_config;
    std::vector<SweepPoint> points;
};

/// Named trajectory schemes accepted by sweeps: toward_dest, toward_source,
/// static_mid (hover at D/2) and cyclic (shuttle between D/4 and 3D/4).
TrajectoryPattern pattern_from_scheme(const std::string& scheme, const PhyParams& phy);

/// One solve per (scheme, horizon) pair, in the given order.
SweepResult run_sweep(const ScenarioConfig& config, const std::vector<double>& t_values,
                      const std::vector<std::string>& schemes);

// CSV emission. Full-precision scientific notation, fixed column order,
// resolved config echoed as comment lines; output is byte-identical across
// reruns of the same config.
std::string emit_csv(const SolveResult& result);
std::string emit_csv(const SweepResult& result);
std::string emit_csv(const Trajectory& traj);

} // namespace relay

// Command-line front end: solve one scenario, sweep horizons and schemes,
// emit trajectories, or cross-check a small instance against the grid oracle.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relay/closed_form.hpp"
#include "relay/oracle.hpp"
#include "relay/scenario.hpp"

namespace {

int exit_code_for(relay::ErrorCode code) {
    switch (code) {
        case relay::ErrorCode::invalid_parameter:
        case relay::ErrorCode::config_error:
        case relay::ErrorCode::dimension_mismatch:
            return 2;
        case relay::ErrorCode::degenerate_weights:
        case relay::ErrorCode::infeasible_target:
            return 3;
        case relay::ErrorCode::recovery_failure:
        case relay::ErrorCode::case_inconsistency:
            return 4;
        case relay::ErrorCode::unsupported_size:
            return 5;
    }
    return 1;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw relay::SolverError(relay::ErrorCode::config_error, "cannot write output file: " + path);
    }
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relayopt: throughput-optimal power allocation for mobile relays"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_path;

    auto* solve_cmd = app.add_subcommand("solve", "solve one scenario and emit the per-slot CSV");
    solve_cmd->add_option("config", config_path, "scenario config file")->required();
    solve_cmd->add_option("-o,--output", output_path, "output CSV path (default: stdout)");

    std::vector<double> t_list;
    std::vector<std::string> schemes;
    auto* sweep_cmd = app.add_subcommand("sweep", "throughput table over horizons and schemes");
    sweep_cmd->add_option("config", config_path, "scenario config file")->required();
    sweep_cmd->add_option("--t-list", t_list, "horizon durations in seconds")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--schemes", schemes,
                          "trajectory schemes: toward_dest, toward_source, static_mid, cyclic")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("-o,--output", output_path, "output CSV path (default: stdout)");

    std::string pattern_name;
    double lo_m = -1.0, hi_m = -1.0, x_m = -1.0;
    auto* traj_cmd = app.add_subcommand("trajectory", "emit the discretized trajectory only");
    traj_cmd->add_option("pattern", pattern_name, "toward_dest, toward_source, cyclic or static")
        ->required();
    traj_cmd->add_option("--config", config_path, "scenario config for geometry and horizon")->required();
    traj_cmd->add_option("--lo-m", lo_m, "cyclic lower turning point (default: D/4)");
    traj_cmd->add_option("--hi-m", hi_m, "cyclic upper turning point (default: 3D/4)");
    traj_cmd->add_option("--x-m", x_m, "static hover position (default: D/2)");
    traj_cmd->add_option("-o,--output", output_path, "output CSV path (default: stdout)");

    int grid_points = 21;
    int refine_rounds = 3;
    auto* verify_cmd = app.add_subcommand("verify", "solve and cross-check against the grid oracle (N <= 4)");
    verify_cmd->add_option("config", config_path, "scenario config file")->required();
    verify_cmd->add_option("--grid", grid_points, "grid points per dimension (default 21)");
    verify_cmd->add_option("--rounds", refine_rounds, "refinement rounds (default 3)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) {
            const relay::ScenarioConfig config = relay::load_config(config_path);
            const relay::SolveResult result = relay::run_solve(config);
            write_output(relay::emit_csv(result), output_path);
            std::fprintf(stderr, "case=%s objective=%.9g bps/Hz throughput=%.9g bps/Hz gap=%.3g wall=%.3fs\n",
                         relay::case_tag_name(result.solution.case_tag), result.solution.objective,
                         result.solution.throughput, result.solution.gap, result.wall_time_s);
            return 0;
        }

        if (sweep_cmd->parsed()) {
            const relay::ScenarioConfig config = relay::load_config(config_path);
            const relay::SweepResult result = relay::run_sweep(config, t_list, schemes);
            write_output(relay::emit_csv(result), output_path);
            return 0;
        }

        if (traj_cmd->parsed()) {
            const relay::ScenarioConfig config = relay::load_config(config_path);
            relay::TrajectoryPattern pattern;
            if (pattern_name == "cyclic") {
                pattern = relay::TrajectoryPattern::cyclic(
                    lo_m >= 0.0 ? lo_m : config.phy.distance_m / 4.0,
                    hi_m >= 0.0 ? hi_m : 3.0 * config.phy.distance_m / 4.0);
            } else if (pattern_name == "static") {
                pattern = relay::TrajectoryPattern::fixed(
                    x_m >= 0.0 ? x_m : config.phy.distance_m / 2.0);
            } else if (pattern_name == "toward_dest") {
                pattern = relay::TrajectoryPattern::toward_dest();
            } else if (pattern_name == "toward_source") {
                pattern = relay::TrajectoryPattern::toward_source();
            } else {
                throw relay::SolverError(relay::ErrorCode::invalid_parameter,
                                         "unknown pattern '" + pattern_name + "'");
            }
            const relay::Trajectory traj =
                relay::generate_trajectory(pattern, config.phy, config.n_slots);
            write_output(relay::emit_csv(traj), output_path);
            return 0;
        }

        if (verify_cmd->parsed()) {
            const relay::ScenarioConfig config = relay::load_config(config_path);
            if (config.n_slots > 4) {
                throw relay::SolverError(relay::ErrorCode::unsupported_size,
                                         "verify needs n_slots <= 4 for the grid oracle");
            }
            const relay::SolveResult solved = relay::run_solve(config);

            relay::ProblemInstance inst;
            inst.gains = solved.gains;
            inst.e_s = config.e_s();
            inst.e_r = config.e_r();
            const relay::OracleResult oracle = relay::grid_search_solve(inst, grid_points, refine_rounds);
            const relay::FeasibilityReport report =
                relay::check_feasibility(inst, solved.solution, config.solver.feasibility_tol);

            std::printf("solver objective : %.12g bps/Hz (%s)\n", solved.solution.objective,
                        relay::case_tag_name(solved.solution.case_tag));
            std::printf("oracle objective : %.12g bps/Hz (band %.3g)\n", oracle.solution.objective,
                        oracle.band);
            std::printf("duality gap      : %.3g\n", solved.solution.gap);
            std::printf("max violation    : %.3g (tol %.1g)\n", report.max_violation,
                        config.solver.feasibility_tol);

            const bool sandwich_ok =
                oracle.solution.objective <= solved.solution.objective + 1e-6 &&
                solved.solution.objective <= oracle.solution.objective + oracle.band;
            if (!report.passed || !sandwich_ok) {
                std::printf("verify: FAIL\n");
                return 1;
            }
            std::printf("verify: PASS\n");
            return 0;
        }
    } catch (const relay::SolverError& err) {
        std::fprintf(stderr, "error: %s: %s\n", relay::error_code_name(err.code()), err.what());
        return exit_code_for(err.code());
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: internal: %s\n", err.what());
        return 1;
    }
    return 0;
}

// Python bindings for the core operations: trajectory and channel modeling,
// water-filling kernels, the dual solver and the verification oracle.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relay/closed_form.hpp"
#include "relay/oracle.hpp"
#include "relay/phy_channel.hpp"
#include "relay/waterfill.hpp"

namespace py = pybind11;

namespace {

std::vector<double> as_vector(const std::vector<double>& v) { return v; }

} // namespace

PYBIND11_MODULE(_relayopt, m) {
    m.doc() = "Throughput-optimal power and rate allocation for mobile relays";

    py::register_exception<relay::SolverError>(m, "SolverError");

    py::class_<relay::PhyParams>(m, "PhyParams")
        .def(py::init<>())
        .def_readwrite("distance_m", &relay::PhyParams::distance_m)
        .def_readwrite("altitude_m", &relay::PhyParams::altitude_m)
        .def_readwrite("gamma0_db", &relay::PhyParams::gamma0_db)
        .def_readwrite("vmax_mps", &relay::PhyParams::vmax_mps)
        .def_readwrite("slot_len_s", &relay::PhyParams::slot_len_s)
        .def("gamma0_linear", &relay::PhyParams::gamma0_linear)
        .def("max_step_m", &relay::PhyParams::max_step_m);

    py::class_<relay::TrajectoryPattern>(m, "TrajectoryPattern")
        .def_static("toward_dest", &relay::TrajectoryPattern::toward_dest)
        .def_static("toward_source", &relay::TrajectoryPattern::toward_source)
        .def_static("cyclic", &relay::TrajectoryPattern::cyclic, py::arg("lo_m"), py::arg("hi_m"))
        .def_static("fixed", &relay::TrajectoryPattern::fixed, py::arg("x0_m"));

    py::class_<relay::Trajectory>(m, "Trajectory")
        .def_readonly("x_m", &relay::Trajectory::x_m)
        .def_readonly("params", &relay::Trajectory::params)
        .def("n_slots", &relay::Trajectory::n_slots);

    py::class_<relay::LinkGains>(m, "LinkGains")
        .def(py::init([](std::vector<double> g_sr, std::vector<double> g_rd) {
                 return relay::LinkGains{std::move(g_sr), std::move(g_rd)};
             }),
             py::arg("g_sr"), py::arg("g_rd"))
        .def_readwrite("g_sr", &relay::LinkGains::g_sr)
        .def_readwrite("g_rd", &relay::LinkGains::g_rd)
        .def("n_slots", &relay::LinkGains::n_slots);

    m.def("generate_trajectory", &relay::generate_trajectory, py::arg("pattern"), py::arg("params"),
          py::arg("n_slots"));
    m.def(
        "validate_trajectory",
        [](const relay::Trajectory& traj) {
            const relay::TrajectoryReport report = relay::validate_trajectory(traj);
            py::list out;
            for (const auto& v : report.violations) {
                const char* type = v.type == relay::TrajectoryViolation::Type::speed ? "speed"
                                   : v.type == relay::TrajectoryViolation::Type::below_zero
                                       ? "below_zero"
                                       : "beyond_distance";
                out.append(py::make_tuple(type, v.slot, v.magnitude));
            }
            return out;
        },
        py::arg("trajectory"), "List of (constraint, slot, magnitude) violations; empty when valid.");
    m.def("channel_gains", &relay::channel_gains, py::arg("trajectory"));

    py::class_<relay::WfResult>(m, "WfResult")
        .def_readonly("powers", &relay::WfResult::powers)
        .def_readonly("water_level", &relay::WfResult::water_level)
        .def_readonly("rates", &relay::WfResult::rates)
        .def("total_power", &relay::WfResult::total_power)
        .def("total_rate", &relay::WfResult::total_rate);

    m.def(
        "weighted_wf",
        [](std::vector<double> gains, std::vector<double> weights, double budget) {
            return relay::weighted_wf(gains, weights, budget);
        },
        py::arg("gains"), py::arg("weights"), py::arg("budget"));
    m.def(
        "classic_wf",
        [](std::vector<double> gains, double budget) { return relay::classic_wf(gains, budget); },
        py::arg("gains"), py::arg("budget"));
    m.def(
        "rate_curve",
        [](std::vector<double> gains, double budget) { return relay::rate_curve(gains, budget); },
        py::arg("gains"), py::arg("budget"));
    m.def(
        "invert_rate_curve",
        [](std::vector<double> gains, double target_rate, double budget_cap) {
            return relay::invert_rate_curve(gains, target_rate, budget_cap);
        },
        py::arg("gains"), py::arg("target_rate"), py::arg("budget_cap"));

    py::class_<relay::ProblemInstance>(m, "ProblemInstance")
        .def(py::init([](relay::LinkGains gains, double e_s, double e_r) {
                 return relay::ProblemInstance{std::move(gains), e_s, e_r};
             }),
             py::arg("gains"), py::arg("e_s"), py::arg("e_r"))
        .def_readwrite("gains", &relay::ProblemInstance::gains)
        .def_readwrite("e_s", &relay::ProblemInstance::e_s)
        .def_readwrite("e_r", &relay::ProblemInstance::e_r)
        .def("n_slots", &relay::ProblemInstance::n_slots);

    py::enum_<relay::CaseTag>(m, "CaseTag")
        .value("case1", relay::CaseTag::case1)
        .value("case2", relay::CaseTag::case2)
        .value("case3", relay::CaseTag::case3)
        .value("closed_form", relay::CaseTag::closed_form)
        .value("oracle", relay::CaseTag::oracle);

    py::class_<relay::Solution>(m, "Solution")
        .def_property_readonly("p_s", [](const relay::Solution& s) { return as_vector(s.p_s); })
        .def_property_readonly("r_s", [](const relay::Solution& s) { return as_vector(s.r_s); })
        .def_property_readonly("p_r", [](const relay::Solution& s) { return as_vector(s.p_r); })
        .def_property_readonly("r_r", [](const relay::Solution& s) { return as_vector(s.r_r); })
        .def_property_readonly("buffer", [](const relay::Solution& s) { return as_vector(s.buffer); })
        .def_property_readonly("source_levels",
                               [](const relay::Solution& s) { return as_vector(s.source_levels); })
        .def_property_readonly("relay_levels",
                               [](const relay::Solution& s) { return as_vector(s.relay_levels); })
        .def_property_readonly("lambda_", [](const relay::Solution& s) { return as_vector(s.lambda); })
        .def_readonly("objective", &relay::Solution::objective)
        .def_readonly("throughput", &relay::Solution::throughput)
        .def_readonly("case_tag", &relay::Solution::case_tag)
        .def_readonly("gap", &relay::Solution::gap)
        .def_readonly("converged", &relay::Solution::converged);

    m.def("solve", [](const relay::ProblemInstance& inst) { return relay::solve(inst); },
          py::arg("instance"));
    m.def("solve_general",
          [](const relay::ProblemInstance& inst) { return relay::solve_general(inst); },
          py::arg("instance"));
    m.def("is_monotone_instance", &relay::is_monotone_instance, py::arg("gains"),
          py::arg("tol") = 1e-9);
    m.def("solve_monotone", &relay::solve_monotone, py::arg("instance"));

    py::class_<relay::FeasibilityReport>(m, "FeasibilityReport")
        .def_readonly("max_violation", &relay::FeasibilityReport::max_violation)
        .def_readonly("passed", &relay::FeasibilityReport::passed)
        .def_property_readonly("violations", [](const relay::FeasibilityReport& r) {
            py::list out;
            for (const auto& v : r.violations) {
                out.append(py::make_tuple(v.constraint, v.slot, v.magnitude));
            }
            return out;
        });

    m.def("check_feasibility", &relay::check_feasibility, py::arg("instance"), py::arg("solution"),
          py::arg("tol") = 1e-6);

    py::class_<relay::OracleResult>(m, "OracleResult")
        .def_readonly("solution", &relay::OracleResult::solution)
        .def_readonly("band", &relay::OracleResult::band);

    m.def("grid_search_solve", &relay::grid_search_solve, py::arg("instance"),
          py::arg("grid_points_per_dim") = 21, py::arg("refine_rounds") = 3);
}

#include "relay/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "relay/oracle.hpp"

namespace relay {

namespace {

std::string trim(const std::string& s) {
    const size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const size_t last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct IniFile {
    // section -> key -> value, plus source locations for error messages
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string name;
};

IniFile parse_ini(std::istream& in, const std::string& name) {
    IniFile ini;
    ini.name = name;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw SolverError(ErrorCode::config_error,
                                  name + ":" + std::to_string(line_no) + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            ini.sections[section];
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw SolverError(ErrorCode::config_error,
                              name + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw SolverError(ErrorCode::config_error,
                              name + ":" + std::to_string(line_no) + ": empty key or value");
        }
        if (section.empty()) {
            throw SolverError(ErrorCode::config_error,
                              name + ":" + std::to_string(line_no) + ": key outside any [section]");
        }
        ini.sections[section][key] = value;
    }
    return ini;
}

class SectionReader {
public:
    SectionReader(const IniFile& ini, const std::string& section)
        : ini_(ini), section_(section) {
        const auto it = ini.sections.find(section);
        if (it != ini.sections.end()) {
            entries_ = &it->second;
        }
    }

    bool present() const { return entries_ != nullptr; }

    double number(const std::string& key) {
        return parse_number(key, require(key));
    }

    double number_or(const std::string& key, double fallback) {
        const std::string* v = lookup(key);
        return v ? parse_number(key, *v) : fallback;
    }

    long integer_or(const std::string& key, long fallback) {
        const std::string* v = lookup(key);
        if (!v) {
            return fallback;
        }
        const double d = parse_number(key, *v);
        const long rounded = std::lround(d);
        if (std::abs(d - rounded) > 1e-9) {
            fail(key, "must be an integer");
        }
        return rounded;
    }

    bool flag_or(const std::string& key, bool fallback) {
        const std::string* v = lookup(key);
        if (!v) {
            return fallback;
        }
        if (*v == "true" || *v == "1" || *v == "on") {
            return true;
        }
        if (*v == "false" || *v == "0" || *v == "off") {
            return false;
        }
        fail(key, "must be a boolean (true/false)");
        return fallback;
    }

    std::string text(const std::string& key) { return require(key); }

    bool has(const std::string& key) const {
        return entries_ && entries_->count(key) > 0;
    }

    void mark_known(std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
            known_.insert(k);
        }
    }

    void reject_unknown() const {
        if (!entries_) {
            return;
        }
        for (const auto& [key, value] : *entries_) {
            if (!known_.count(key)) {
                throw SolverError(ErrorCode::config_error,
                                  ini_.name + ": [" + section_ + "] unknown key '" + key + "'");
            }
        }
    }

private:
    const std::string* lookup(const std::string& key) {
        known_.insert(key);
        if (!entries_) {
            return nullptr;
        }
        const auto it = entries_->find(key);
        return it == entries_->end() ? nullptr : &it->second;
    }

    std::string require(const std::string& key) {
        const std::string* v = lookup(key);
        if (!v) {
            throw SolverError(ErrorCode::config_error,
                              ini_.name + ": [" + section_ + "] missing required key '" + key + "'");
        }
        return *v;
    }

    double parse_number(const std::string& key, const std::string& value) {
        try {
            size_t used = 0;
            const double d = std::stod(value, &used);
            if (used != value.size() || !std::isfinite(d)) {
                fail(key, "is not a finite number");
            }
            return d;
        } catch (const std::logic_error&) {
            fail(key, "is not a finite number");
        }
        return 0.0;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw SolverError(ErrorCode::config_error,
                          ini_.name + ": [" + section_ + "] " + key + " " + what);
    }

    const IniFile& ini_;
    std::string section_;
    const std::map<std::string, std::string>* entries_ = nullptr;
    std::set<std::string> known_;
};

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return buf;
}

std::string fmt_compact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double dbm_to_watts(double dbm) {
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

void echo_config(std::ostringstream& out, const ScenarioConfig& cfg) {
    out << "# phy.distance_m = " << fmt_compact(cfg.phy.distance_m) << "\n";
    out << "# phy.altitude_m = " << fmt_compact(cfg.phy.altitude_m) << "\n";
    out << "# phy.gamma0_db = " << fmt_compact(cfg.phy.gamma0_db) << "\n";
    out << "# phy.vmax_mps = " << fmt_compact(cfg.phy.vmax_mps) << "\n";
    out << "# phy.slot_len_s = " << fmt_compact(cfg.phy.slot_len_s) << "\n";
    out << "# horizon.duration_s = " << fmt_compact(cfg.horizon_s) << "\n";
    out << "# horizon.n_slots = " << cfg.n_slots << "\n";
    out << "# power.avg_power_s_dbm = " << fmt_compact(cfg.avg_power_s_dbm) << "\n";
    out << "# power.avg_power_r_dbm = " << fmt_compact(cfg.avg_power_r_dbm) << "\n";
    out << "# trajectory.pattern = " << pattern_kind_name(cfg.trajectory.kind) << "\n";
    if (cfg.trajectory.kind == TrajectoryPattern::Kind::cyclic) {
        out << "# trajectory.lo_m = " << fmt_compact(cfg.trajectory.lo_m) << "\n";
        out << "# trajectory.hi_m = " << fmt_compact(cfg.trajectory.hi_m) << "\n";
    }
    if (cfg.trajectory.kind == TrajectoryPattern::Kind::fixed) {
        out << "# trajectory.x_m = " << fmt_compact(cfg.trajectory.x0_m) << "\n";
    }
    out << "# solver.ellipsoid_tol = " << fmt_compact(cfg.solver.ellipsoid_tol) << "\n";
    out << "# solver.ellipsoid_iter_factor = " << cfg.solver.ellipsoid_iter_factor << "\n";
    out << "# solver.eps_case = " << fmt_compact(cfg.solver.eps_case) << "\n";
    out << "# solver.feasibility_tol = " << fmt_compact(cfg.solver.feasibility_tol) << "\n";
    out << "# solver.gap_rel_tol = " << fmt_compact(cfg.solver.gap_rel_tol) << "\n";
    out << "# solver.polish = " << (cfg.solver.polish ? 1 : 0) << "\n";
    out << "# sweep.seed = " << cfg.seed << "\n";
    out << "# energy.e_s = " << fmt_full(cfg.e_s()) << "\n";
    out << "# energy.e_r = " << fmt_full(cfg.e_r()) << "\n";
}

} // namespace

double ScenarioConfig::e_s() const {
    return n_slots * dbm_to_watts(avg_power_s_dbm);
}

double ScenarioConfig::e_r() const {
    return n_slots * dbm_to_watts(avg_power_r_dbm);
}

void ScenarioConfig::validate() const {
    phy.validate();
    if (n_slots < 2) {
        throw SolverError(ErrorCode::config_error, "horizon must span at least 2 slots");
    }
    const double tol = 1e-6 * std::max(1.0, horizon_s);
    if (std::abs(n_slots * phy.slot_len_s - horizon_s) > tol) {
        throw SolverError(ErrorCode::config_error,
                          "n_slots * slot_len_s must equal the horizon duration");
    }
    if (!std::isfinite(avg_power_s_dbm) || !std::isfinite(avg_power_r_dbm)) {
        throw SolverError(ErrorCode::config_error, "average power limits must be finite");
    }
}

ScenarioConfig parse_config(std::istream& in, const std::string& source_name) {
    const IniFile ini = parse_ini(in, source_name);
    for (const auto& [section, entries] : ini.sections) {
        if (section != "phy" && section != "horizon" && section != "power" &&
            section != "trajectory" && section != "solver" && section != "sweep") {
            throw SolverError(ErrorCode::config_error,
                              source_name + ": unknown section [" + section + "]");
        }
    }

    ScenarioConfig cfg;

    SectionReader phy(ini, "phy");
    cfg.phy.distance_m = phy.number("distance_m");
    cfg.phy.altitude_m = phy.number("altitude_m");
    cfg.phy.gamma0_db = phy.number("gamma0_db");
    cfg.phy.vmax_mps = phy.number("vmax_mps");
    cfg.phy.slot_len_s = phy.number("slot_len_s");
    phy.reject_unknown();

    SectionReader horizon(ini, "horizon");
    cfg.horizon_s = horizon.number("duration_s");
    const long slots = horizon.integer_or("n_slots",
                                          std::lround(cfg.horizon_s / cfg.phy.slot_len_s));
    cfg.n_slots = static_cast<int>(slots);
    horizon.reject_unknown();

    SectionReader power(ini, "power");
    cfg.avg_power_s_dbm = power.number("avg_power_s_dbm");
    cfg.avg_power_r_dbm = power.number("avg_power_r_dbm");
    power.reject_unknown();

    SectionReader traj(ini, "trajectory");
    const std::string pattern = traj.text("pattern");
    if (pattern == "toward_dest") {
        cfg.trajectory = TrajectoryPattern::toward_dest();
    } else if (pattern == "toward_source") {
        cfg.trajectory = TrajectoryPattern::toward_source();
    } else if (pattern == "cyclic") {
        cfg.trajectory = TrajectoryPattern::cyclic(
            traj.number_or("lo_m", cfg.phy.distance_m / 4.0),
            traj.number_or("hi_m", 3.0 * cfg.phy.distance_m / 4.0));
    } else if (pattern == "static") {
        cfg.trajectory = TrajectoryPattern::fixed(traj.number_or("x_m", cfg.phy.distance_m / 2.0));
    } else {
        throw SolverError(ErrorCode::config_error,
                          source_name + ": [trajectory] pattern must be one of "
                          "toward_dest, toward_source, cyclic, static");
    }
    traj.mark_known({"lo_m", "hi_m", "x_m"});
    traj.reject_unknown();

    SectionReader solver(ini, "solver");
    cfg.solver.ellipsoid_tol = solver.number_or("ellipsoid_tol", cfg.solver.ellipsoid_tol);
    cfg.solver.ellipsoid_iter_factor =
        solver.integer_or("ellipsoid_iter_factor", cfg.solver.ellipsoid_iter_factor);
    cfg.solver.eps_case = solver.number_or("eps_case", cfg.solver.eps_case);
    cfg.solver.feasibility_tol = solver.number_or("feasibility_tol", cfg.solver.feasibility_tol);
    cfg.solver.gap_rel_tol = solver.number_or("gap_rel_tol", cfg.solver.gap_rel_tol);
    cfg.solver.polish = solver.flag_or("polish", cfg.solver.polish);
    solver.reject_unknown();

    SectionReader sweep(ini, "sweep");
    cfg.seed = static_cast<unsigned long>(sweep.integer_or("seed", 0));
    sweep.reject_unknown();

    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SolverError(ErrorCode::config_error, "cannot open config file: " + path);
    }
    return parse_config(in, path);
}

SolveResult run_solve(const ScenarioConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    SolveResult result;
    result.config = config;
    result.trajectory = generate_trajectory(config.trajectory, config.phy, config.n_slots);
    const TrajectoryReport report = validate_trajectory(result.trajectory);
    if (!report.valid()) {
        throw SolverError(ErrorCode::invalid_parameter, "generated trajectory violates constraints");
    }
    result.gains = channel_gains(result.trajectory);

    ProblemInstance inst;
    inst.gains = result.gains;
    inst.e_s = config.e_s();
    inst.e_r = config.e_r();
    result.solution = solve(inst, config.solver);

    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

TrajectoryPattern pattern_from_scheme(const std::string& scheme, const PhyParams& phy) {
    if (scheme == "toward_dest") {
        return TrajectoryPattern::toward_dest();
    }
    if (scheme == "toward_source") {
        return TrajectoryPattern::toward_source();
    }
    if (scheme == "static_mid") {
        return TrajectoryPattern::fixed(phy.distance_m / 2.0);
    }
    if (scheme == "cyclic") {
        return TrajectoryPattern::cyclic(phy.distance_m / 4.0, 3.0 * phy.distance_m / 4.0);
    }
    throw SolverError(ErrorCode::config_error,
                      "unknown scheme '" + scheme +
                      "' (expected toward_dest, toward_source, static_mid or cyclic)");
}

SweepResult run_sweep(const ScenarioConfig& config, const std::vector<double>& t_values,
                      const std::vector<std::string>& schemes) {
    config.validate();
    if (t_values.empty() || schemes.empty()) {
        throw SolverError(ErrorCode::invalid_parameter, "sweep needs at least one horizon and one scheme");
    }

    SweepResult out;
    out.base_config = config;
    for (const std::string& scheme : schemes) {
        for (const double t : t_values) {
            ScenarioConfig point_cfg = config;
            point_cfg.horizon_s = t;
            point_cfg.n_slots = static_cast<int>(std::lround(t / config.phy.slot_len_s));
            point_cfg.trajectory = pattern_from_scheme(scheme, config.phy);
            const SolveResult solved = run_solve(point_cfg);

            SweepPoint point;
            point.scheme = scheme;
            point.t_s = t;
            point.n_slots = point_cfg.n_slots;
            point.objective = solved.solution.objective;
            point.throughput = solved.solution.throughput;
            point.case_tag = solved.solution.case_tag;
            point.gap = solved.solution.gap;
            out.points.push_back(point);
        }
    }
    return out;
}

std::string emit_csv(const SolveResult& result) {
    std::ostringstream out;
    out << "# relayopt solve result\n";
    echo_config(out, result.config);
    const Solution& sol = result.solution;
    out << "# result.case = " << case_tag_name(sol.case_tag) << "\n";
    out << "# result.objective_bps_hz = " << fmt_full(sol.objective) << "\n";
    out << "# result.throughput_bps_hz = " << fmt_full(sol.throughput) << "\n";
    out << "# result.gap = " << fmt_full(sol.gap) << "\n";
    out << "# result.converged = " << (sol.converged ? 1 : 0) << "\n";
    out << "slot,t_s,x_m,gamma_sr,gamma_rd,p_s,r_s,p_r,r_r,buffer,level_s,level_r\n";

    const int n = result.trajectory.n_slots();
    for (int slot = 1; slot <= n; ++slot) {
        const size_t idx = static_cast<size_t>(slot) - 1;
        // source transmits in slots 1..N-1, relay in slots 2..N
        const double p_s = slot < n ? sol.p_s[idx] : 0.0;
        const double r_s = slot < n ? sol.r_s[idx] : 0.0;
        const double p_r = slot > 1 ? sol.p_r[idx - 1] : 0.0;
        const double r_r = slot > 1 ? sol.r_r[idx - 1] : 0.0;
        const double level_s = slot < n && !sol.source_levels.empty() ? sol.source_levels[idx] : 0.0;
        const double level_r = slot > 1 && !sol.relay_levels.empty() ? sol.relay_levels[idx - 1] : 0.0;
        out << slot << ',' << fmt_full((slot - 1) * result.config.phy.slot_len_s) << ','
            << fmt_full(result.trajectory.x_m[idx]) << ',' << fmt_full(result.gains.g_sr[idx]) << ','
            << fmt_full(result.gains.g_rd[idx]) << ',' << fmt_full(p_s) << ',' << fmt_full(r_s) << ','
            << fmt_full(p_r) << ',' << fmt_full(r_r) << ',' << fmt_full(sol.buffer[idx]) << ','
            << fmt_full(level_s) << ',' << fmt_full(level_r) << "\n";
    }
    return out.str();
}

std::string emit_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "# relayopt sweep result\n";
    echo_config(out, result.base_config);
    out << "scheme,t_s,n_slots,objective_bps_hz,throughput_bps_hz,case,gap\n";
    for (const SweepPoint& point : result.points) {
        out << point.scheme << ',' << fmt_full(point.t_s) << ',' << point.n_slots << ','
            << fmt_full(point.objective) << ',' << fmt_full(point.throughput) << ','
            << case_tag_name(point.case_tag) << ',' << fmt_full(point.gap) << "\n";
    }
    return out.str();
}

std::string emit_csv(const Trajectory& traj) {
    std::ostringstream out;
    out << "# relayopt trajectory\n";
    out << "slot,t_s,x_m\n";
    for (int slot = 1; slot <= traj.n_slots(); ++slot) {
        out << slot << ',' << fmt_full((slot - 1) * traj.params.slot_len_s) << ','
            << fmt_full(traj.x_m[static_cast<size_t>(slot) - 1]) << "\n";
    }
    return out.str();
}

} // namespace relay

#include "relay/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relay {

namespace {

double checked_log2p1(double p, double g) {
    return std::log2(1.0 + p * g);
}

// Candidate values per dimension over a box, endpoints included.
std::vector<double> axis_values(double lo, double hi, int points) {
    std::vector<double> v(static_cast<size_t>(points), lo);
    if (points == 1 || hi <= lo) {
        return std::vector<double>(1, lo);
    }
    const double h = (hi - lo) / (points - 1);
    for (int k = 0; k < points; ++k) {
        v[static_cast<size_t>(k)] = lo + k * h;
    }
    v.back() = hi;
    return v;
}

// Recursive enumeration of power vectors with sum <= budget.
template <typename Fn>
void enumerate(const std::vector<std::vector<double>>& axes, double budget, std::vector<double>& point,
               size_t dim, double running_sum, Fn&& fn) {
    if (dim == axes.size()) {
        fn(point);
        return;
    }
    const double slack = budget * (1.0 + 1e-12) + 1e-15;
    for (const double value : axes[dim]) {
        if (running_sum + value > slack) {
            break; // axis values ascend
        }
        point[dim] = value;
        enumerate(axes, budget, point, dim + 1, running_sum + value, fn);
    }
}

} // namespace

FeasibilityReport check_feasibility(const ProblemInstance& inst, const Solution& sol, double tol) {
    inst.validate();
    const int n = inst.n_slots();
    const size_t m = static_cast<size_t>(n) - 1;
    if (sol.p_s.size() != m || sol.r_s.size() != m || sol.p_r.size() != m || sol.r_r.size() != m) {
        throw SolverError(ErrorCode::dimension_mismatch,
                          "solution dimensions do not match the instance");
    }

    FeasibilityReport report;
    const auto add = [&report](const char* constraint, int slot, double magnitude) {
        if (magnitude > 0.0) {
            report.violations.push_back({constraint, slot, magnitude});
            report.max_violation = std::max(report.max_violation, magnitude);
        }
    };

    const double power_scale_s = std::max(1.0, inst.e_s);
    const double power_scale_r = std::max(1.0, inst.e_r);
    const double rate_scale = std::max(1.0, std::accumulate(sol.r_s.begin(), sol.r_s.end(), 0.0));

    const auto src_g = inst.source_gains();
    const auto rel_g = inst.relay_gains();

    double sum_ps = 0.0;
    double sum_pr = 0.0;
    double supplied = 0.0;
    double forwarded = 0.0;
    for (size_t j = 0; j < m; ++j) {
        const int source_slot = static_cast<int>(j) + 1;
        const int relay_slot = static_cast<int>(j) + 2;
        add("p_s_nonneg", source_slot, -sol.p_s[j] / power_scale_s);
        add("p_r_nonneg", relay_slot, -sol.p_r[j] / power_scale_r);
        sum_ps += sol.p_s[j];
        sum_pr += sol.p_r[j];

        // source rates are defined by the powers
        const double rs_cap = checked_log2p1(std::max(0.0, sol.p_s[j]), src_g[j]);
        add("source_rate_consistency", source_slot, std::abs(sol.r_s[j] - rs_cap) / rate_scale);

        const double rr_cap = checked_log2p1(std::max(0.0, sol.p_r[j]), rel_g[j]);
        add("relay_rate_cap", relay_slot, (sol.r_r[j] - rr_cap) / rate_scale);
        add("relay_rate_nonneg", relay_slot, -sol.r_r[j] / rate_scale);

        supplied += sol.r_s[j];
        forwarded += sol.r_r[j];
        add("causality", relay_slot, (forwarded - supplied) / rate_scale);
    }
    add("source_budget", 0, (sum_ps - inst.e_s) / power_scale_s);
    add("relay_budget", 0, (sum_pr - inst.e_r) / power_scale_r);

    report.passed = report.max_violation <= tol;
    return report;
}

OracleResult grid_search_solve(const ProblemInstance& inst, int grid_points_per_dim, int refine_rounds) {
    inst.validate();
    const int n = inst.n_slots();
    if (n > 4) {
        throw SolverError(ErrorCode::unsupported_size,
                          "grid oracle supports N <= 4 (at most 6 free power variables)");
    }
    if (grid_points_per_dim < 5) {
        throw SolverError(ErrorCode::invalid_parameter, "grid needs at least 5 points per dimension");
    }
    const size_t m = static_cast<size_t>(n) - 1;
    const auto src_g = inst.source_gains();
    const auto rel_g = inst.relay_gains();

    double best_objective = -1.0;
    std::vector<double> best_ps(m, 0.0);
    std::vector<double> best_pr(m, 0.0);
    std::vector<double> best_rs(m, 0.0);
    std::vector<double> best_rr(m, 0.0);

    std::vector<double> span_s(m, inst.e_s);
    std::vector<double> span_r(m, inst.e_r);
    std::vector<double> center_s(m, 0.5 * inst.e_s);
    std::vector<double> center_r(m, 0.5 * inst.e_r);

    std::vector<double> ps(m, 0.0), pr(m, 0.0), rs(m, 0.0), caps(m, 0.0), rr(m, 0.0);

    for (int round = 0; round <= refine_rounds; ++round) {
        std::vector<std::vector<double>> axes_s(m), axes_r(m);
        for (size_t i = 0; i < m; ++i) {
            double lo = std::max(0.0, center_s[i] - 0.5 * span_s[i]);
            double hi = std::min(inst.e_s, lo + span_s[i]);
            lo = std::max(0.0, hi - span_s[i]);
            axes_s[i] = axis_values(lo, hi, grid_points_per_dim);

            lo = std::max(0.0, center_r[i] - 0.5 * span_r[i]);
            hi = std::min(inst.e_r, lo + span_r[i]);
            lo = std::max(0.0, hi - span_r[i]);
            axes_r[i] = axis_values(lo, hi, grid_points_per_dim);
        }

        enumerate(axes_s, inst.e_s, ps, 0, 0.0, [&](const std::vector<double>& source_point) {
            double running = 0.0;
            for (size_t i = 0; i < m; ++i) {
                rs[i] = checked_log2p1(source_point[i], src_g[i]);
                running += rs[i];
                caps[i] = running;
            }
            enumerate(axes_r, inst.e_r, pr, 0, 0.0, [&](const std::vector<double>& relay_point) {
                // greedy forwarding: min(capacity, buffer content) per slot
                double forwarded = 0.0;
                for (size_t j = 0; j < m; ++j) {
                    const double cap = checked_log2p1(relay_point[j], rel_g[j]);
                    rr[j] = std::max(0.0, std::min(cap, caps[j] - forwarded));
                    forwarded += rr[j];
                }
                if (forwarded > best_objective) {
                    best_objective = forwarded;
                    best_ps = source_point;
                    best_pr = relay_point;
                    best_rs = rs;
                    best_rr = rr;
                }
            });
        });

        for (size_t i = 0; i < m; ++i) {
            center_s[i] = best_ps[i];
            center_r[i] = best_pr[i];
            span_s[i] *= 0.25;
            span_r[i] *= 0.25;
        }
    }

    // Lipschitz band from the coarse grid: each source rate drops at most
    // log2(1 + h_s g) when its power is rounded down to the lattice, each
    // relay capacity at most log2(1 + h_r g); the objective equals the
    // minimum cut, so the drop is bounded by the worst cut.
    const double h_s = inst.e_s / (grid_points_per_dim - 1);
    const double h_r = inst.e_r / (grid_points_per_dim - 1);
    std::vector<double> delta(m, 0.0), eps(m, 0.0);
    for (size_t i = 0; i < m; ++i) {
        delta[i] = checked_log2p1(h_s, src_g[i]);
        eps[i] = checked_log2p1(h_r, rel_g[i]);
    }
    double band = 0.0;
    for (size_t cut = 0; cut <= m; ++cut) {
        double drop = 0.0;
        for (size_t i = 0; i < cut; ++i) {
            drop += delta[i];
        }
        for (size_t j = cut; j < m; ++j) {
            drop += eps[j];
        }
        band = std::max(band, drop);
    }

    OracleResult out;
    out.band = band;
    Solution& sol = out.solution;
    sol.case_tag = CaseTag::oracle;
    sol.p_s = best_ps;
    sol.r_s = best_rs;
    sol.p_r = best_pr;
    sol.r_r = best_rr;
    sol.buffer.assign(static_cast<size_t>(n), 0.0);
    double supplied = 0.0;
    double forwarded = 0.0;
    for (size_t j = 0; j < m; ++j) {
        supplied += sol.r_s[j];
        forwarded += sol.r_r[j];
        sol.buffer[j + 1] = supplied - forwarded;
    }
    sol.objective = std::max(0.0, best_objective);
    sol.throughput = sol.objective / n;
    return out;
}

double duality_gap(const ProblemInstance& inst, const DualPoint& dp, const Solution& sol) {
    if (!dp.feasible(1e-12)) {
        throw SolverError(ErrorCode::invalid_parameter, "dual point is infeasible");
    }
    const FeasibilityReport report = check_feasibility(inst, sol, 1e-6);
    if (!report.passed) {
        throw SolverError(ErrorCode::invalid_parameter, "solution is infeasible");
    }
    return evaluate_dual(inst, dp).g_value - sol.objective;
}

} // namespace relay

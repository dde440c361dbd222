#include "relay/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relay {

const char* bottleneck_name(Bottleneck b) {
    switch (b) {
        case Bottleneck::source_limited: return "source_limited";
        case Bottleneck::relay_limited: return "relay_limited";
        case Bottleneck::balanced: return "balanced";
    }
    return "unknown";
}

bool is_monotone_instance(const LinkGains& gains, double tol) {
    const int n = gains.n_slots();
    if (n < 2 || static_cast<int>(gains.g_rd.size()) != n) {
        return false;
    }
    // source decision slots 1..N-1: gamma_SR non-increasing
    for (int i = 0; i + 2 < n; ++i) {
        if (gains.g_sr[static_cast<size_t>(i) + 1] > gains.g_sr[static_cast<size_t>(i)] * (1.0 + tol)) {
            return false;
        }
    }
    // relay decision slots 2..N: gamma_RD non-decreasing
    for (int i = 1; i + 1 < n; ++i) {
        if (gains.g_rd[static_cast<size_t>(i) + 1] < gains.g_rd[static_cast<size_t>(i)] * (1.0 - tol)) {
            return false;
        }
    }
    return true;
}

BottleneckSplit compute_split(const ProblemInstance& inst) {
    inst.validate();
    const double rate_s = rate_curve(inst.source_gains(), inst.e_s);
    const double rate_r = rate_curve(inst.relay_gains(), inst.e_r);

    BottleneckSplit split;
    const double tie_tol = 1e-12 * std::max({1.0, rate_s, rate_r});
    if (std::abs(rate_s - rate_r) <= tie_tol) {
        split.bottleneck = Bottleneck::balanced;
        split.e_s_used = inst.e_s;
        split.e_r_used = inst.e_r;
    } else if (rate_s < rate_r) {
        split.bottleneck = Bottleneck::source_limited;
        split.e_s_used = inst.e_s;
        split.e_r_used = invert_rate_curve(inst.relay_gains(), rate_s, inst.e_r);
    } else {
        split.bottleneck = Bottleneck::relay_limited;
        split.e_s_used = invert_rate_curve(inst.source_gains(), rate_r, inst.e_s);
        split.e_r_used = inst.e_r;
    }
    return split;
}

Solution solve_monotone(const ProblemInstance& inst) {
    inst.validate();
    if (!is_monotone_instance(inst.gains)) {
        throw SolverError(ErrorCode::invalid_parameter,
                          "solve_monotone requires non-increasing source gains and "
                          "non-decreasing relay gains");
    }
    const int n = inst.n_slots();
    const int m = n - 1;
    const BottleneckSplit split = compute_split(inst);

    const auto allocate = [m](std::span<const double> gains, double budget) {
        if (budget <= 0.0) {
            WfResult zero;
            zero.powers.assign(static_cast<size_t>(m), 0.0);
            zero.rates.assign(static_cast<size_t>(m), 0.0);
            return zero;
        }
        return classic_wf(gains, budget);
    };
    const WfResult src = allocate(inst.source_gains(), split.e_s_used);
    const WfResult rel = allocate(inst.relay_gains(), split.e_r_used);

    Solution sol;
    sol.case_tag = CaseTag::closed_form;
    sol.p_s = src.powers;
    sol.r_s = src.rates;
    sol.p_r = rel.powers;
    sol.r_r = rel.rates;
    sol.source_levels.assign(static_cast<size_t>(m), src.water_level);
    sol.relay_levels.assign(static_cast<size_t>(m), rel.water_level);

    sol.buffer.assign(static_cast<size_t>(n), 0.0);
    double supplied = 0.0;
    double forwarded = 0.0;
    for (int slot = 2; slot <= n; ++slot) {
        supplied += sol.r_s[static_cast<size_t>(slot) - 2];
        forwarded += sol.r_r[static_cast<size_t>(slot) - 2];
        sol.buffer[static_cast<size_t>(slot) - 1] = supplied - forwarded;
    }
    sol.objective = std::accumulate(sol.r_r.begin(), sol.r_r.end(), 0.0);
    sol.throughput = sol.objective / n;

    // both simplex vertices are dual feasible; the smaller value certifies
    const double rate_s_full = rate_curve(inst.source_gains(), inst.e_s);
    const double rate_r_full = rate_curve(inst.relay_gains(), inst.e_r);
    sol.gap = std::min(rate_s_full, rate_r_full) - sol.objective;
    return sol;
}

bool lemma1_check(const DualPoint& dp, const LinkGains& gains, double tol) {
    if (!is_monotone_instance(gains)) {
        throw SolverError(ErrorCode::invalid_parameter,
                          "lemma1_check requires a monotone instance");
    }
    // only lambda_N may carry mass; interior multipliers are lambda_2..lambda_{N-1}
    for (size_t j = 0; j + 1 < dp.lambda.size(); ++j) {
        if (dp.lambda[j] > tol) {
            return false;
        }
    }
    return true;
}

} // namespace relay

#include "relay/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relay {

namespace {

constexpr double kBudgetResidualTol = 1e-12; // absolute, on the spilled-power residual
constexpr int kMaxBisectIters = 200;
constexpr double kRateResidualTol = 1e-12;  // bisection stop; well inside the 1e-9 contract
constexpr double kInfeasibleSlack = 1e-9;

void check_inputs(std::span<const double> gains, std::span<const double> weights, double budget) {
    if (gains.size() != weights.size()) {
        throw SolverError(ErrorCode::dimension_mismatch, "gains and weights differ in length");
    }
    if (gains.empty()) {
        throw SolverError(ErrorCode::invalid_parameter, "empty gain sequence");
    }
    for (const double g : gains) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw SolverError(ErrorCode::invalid_parameter, "gains must be strictly positive");
        }
    }
    for (const double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw SolverError(ErrorCode::invalid_parameter, "weights must be non-negative");
        }
    }
    if (!(budget >= 0.0) || !std::isfinite(budget)) {
        throw SolverError(ErrorCode::invalid_parameter, "budget must be non-negative");
    }
}

double spilled_power(std::span<const double> gains, std::span<const double> weights, double level) {
    double total = 0.0;
    for (size_t i = 0; i < gains.size(); ++i) {
        if (weights[i] > 0.0) {
            const double p = level * weights[i] - 1.0 / gains[i];
            if (p > 0.0) {
                total += p;
            }
        }
    }
    return total;
}

} // namespace

double WfResult::total_power() const {
    return std::accumulate(powers.begin(), powers.end(), 0.0);
}

double WfResult::total_rate() const {
    return std::accumulate(rates.begin(), rates.end(), 0.0);
}

WfResult weighted_wf(std::span<const double> gains, std::span<const double> weights, double budget) {
    check_inputs(gains, weights, budget);

    WfResult out;
    out.powers.assign(gains.size(), 0.0);
    out.rates.assign(gains.size(), 0.0);
    if (budget == 0.0) {
        return out;
    }

    double weight_sum = 0.0;
    double hi = 0.0;
    for (size_t i = 0; i < gains.size(); ++i) {
        if (weights[i] > 0.0) {
            weight_sum += weights[i];
            hi = std::max(hi, 1.0 / (gains[i] * weights[i]));
        }
    }
    if (weight_sum == 0.0) {
        throw SolverError(ErrorCode::degenerate_weights,
                          "positive budget with all-zero weights");
    }
    hi += budget / weight_sum; // guarantees spilled_power(hi) >= budget

    double lo = 0.0;
    double level = 0.5 * hi;
    for (int iter = 0; iter < kMaxBisectIters; ++iter) {
        level = 0.5 * (lo + hi);
        const double spilled = spilled_power(gains, weights, level);
        if (std::abs(spilled - budget) <= kBudgetResidualTol) {
            break;
        }
        (spilled < budget ? lo : hi) = level;
    }

    out.water_level = level;
    for (size_t i = 0; i < gains.size(); ++i) {
        if (weights[i] > 0.0) {
            const double p = level * weights[i] - 1.0 / gains[i];
            if (p > 0.0) {
                out.powers[i] = p;
                out.rates[i] = std::log2(1.0 + p * gains[i]);
            }
        }
    }
    return out;
}

WfResult classic_wf(std::span<const double> gains, double budget) {
    const std::vector<double> unit(gains.size(), 1.0);
    return weighted_wf(gains, unit, budget);
}

double rate_curve(std::span<const double> gains, double budget) {
    if (budget < 0.0 || !std::isfinite(budget)) {
        throw SolverError(ErrorCode::invalid_parameter, "budget query must be non-negative");
    }
    if (budget == 0.0) {
        return 0.0;
    }
    return classic_wf(gains, budget).total_rate();
}

double invert_rate_curve(std::span<const double> gains, double target_rate, double budget_cap) {
    if (target_rate < 0.0 || !std::isfinite(target_rate)) {
        throw SolverError(ErrorCode::invalid_parameter, "target rate must be non-negative");
    }
    if (!(budget_cap >= 0.0) || !std::isfinite(budget_cap)) {
        throw SolverError(ErrorCode::invalid_parameter, "budget cap must be non-negative");
    }
    if (target_rate == 0.0) {
        return 0.0;
    }
    const double max_rate = rate_curve(gains, budget_cap);
    if (target_rate > max_rate + kInfeasibleSlack) {
        throw SolverError(ErrorCode::infeasible_target,
                          "target rate exceeds the achievable rate at the budget cap");
    }
    if (target_rate >= max_rate) {
        return budget_cap;
    }

    double lo = 0.0;
    double hi = budget_cap;
    for (int iter = 0; iter < kMaxBisectIters; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double rate = rate_curve(gains, mid);
        if (std::abs(rate - target_rate) <= kRateResidualTol) {
            return mid;
        }
        (rate < target_rate ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace relay

#pragma once

#include <span>
#include <vector>

#include "relay/error.hpp"

namespace relay {

// Outcome of a water-filling allocation. Rates are always recomputed from the
// powers, log2(1 + p*g), so downstream feasibility checks see exact values.
struct WfResult {
    std::vector<double> powers;
    double water_level = 0.0;
    std::vector<double> rates;

    double total_power() const;
    double total_rate() const;
};

/// Weighted water-filling: finds the unique level L with
/// sum_n [L*w[n] - 1/g[n]]^+ = budget by bisection and returns the resulting
/// powers p[n] = [L*w[n] - 1/g[n]]^+. Zero-weight slots get zero power.
/// Throws degenerate_weights when budget > 0 and all weights are zero.
WfResult weighted_wf(std::span<const double> gains, std::span<const double> weights, double budget);

/// Classic water-filling: weighted_wf with unit weights (constant level).
WfResult classic_wf(std::span<const double> gains, double budget);

/// Aggregate rate achieved by classic water-filling with total power `budget`.
/// Strictly increasing and concave in the budget.
double rate_curve(std::span<const double> gains, double budget);

/// Inverse of rate_curve: the budget whose classic-WF aggregate rate equals
/// `target_rate`, found by bisection on [0, budget_cap]. Rate residual at the
/// returned budget is at most 1e-9. Throws infeasible_target when the target
/// exceeds rate_curve(gains, budget_cap).
double invert_rate_curve(std::span<const double> gains, double target_rate, double budget_cap);

} // namespace relay

#pragma once

#include <string>

#include "relay/dual_solver.hpp"

namespace relay {

struct FeasibilityViolation {
    std::string constraint;
    int slot;         ///< 1-based slot, 0 for aggregate constraints
    double magnitude; ///< normalized by problem scale
};

struct FeasibilityReport {
    std::vector<FeasibilityViolation> violations;
    double max_violation = 0.0;
    bool passed = true;
};

/// Strict constraint check of a candidate solution: non-negativity, budget
/// sums, per-slot relay rate caps, source rate consistency and every prefix
/// causality constraint. Power violations are normalized by max(1, budget),
/// rate violations by max(1, aggregate rate).
FeasibilityReport check_feasibility(const ProblemInstance& inst, const Solution& sol, double tol = 1e-6);

struct OracleResult {
    Solution solution;
    /// Certified optimality band from the coarse grid: the true optimum lies
    /// in [solution.objective, solution.objective + band].
    double band = 0.0;
};

/// Exhaustive reference solver for tiny instances (N <= 4): enumerates source
/// and relay powers on simplex grids, assigns relay rates greedily as
/// min(capacity, buffer content) -- optimal for fixed powers since earlier
/// transmission never reduces later feasibility -- and refines the grid box
/// 4x around the incumbent for refine_rounds rounds. Deterministic: ties go
/// to the lexicographically smallest power vector.
OracleResult grid_search_solve(const ProblemInstance& inst, int grid_points_per_dim = 21, int refine_rounds = 3);

/// g(dp) - objective(sol). Non-negative up to numerics for any dual-feasible
/// dp and feasible sol (weak duality). Throws invalid_parameter on infeasible
/// inputs.
double duality_gap(const ProblemInstance& inst, const DualPoint& dp, const Solution& sol);

} // namespace relay

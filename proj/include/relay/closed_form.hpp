#pragma once

#include "relay/dual_solver.hpp"

namespace relay {

enum class Bottleneck { source_limited, relay_limited, balanced };

const char* bottleneck_name(Bottleneck b);

// Energy actually spent by each side in the closed-form solution. The
// bottleneck side uses its full budget; the other side backs off to the
// budget whose aggregate rate matches.
struct BottleneckSplit {
    double e_s_used = 0.0;
    double e_r_used = 0.0;
    Bottleneck bottleneck = Bottleneck::balanced;
};

/// Hypothesis of the closed-form solution: source gains non-increasing over
/// the source decision slots 1..N-1 and relay gains non-decreasing over the
/// relay decision slots 2..N (relative tolerance tol). Both hold whenever the
/// relay moves unidirectionally toward the destination.
bool is_monotone_instance(const LinkGains& gains, double tol = 1e-9);

/// Bottleneck detection and energy split via the aggregate rate curves.
BottleneckSplit compute_split(const ProblemInstance& inst);

/// Exact solution for monotone instances: classic water-filling on both sides
/// at the split budgets; the objective is min of the two full-budget
/// aggregate rates. Throws invalid_parameter when the monotonicity
/// precondition fails.
Solution solve_monotone(const ProblemInstance& inst);

/// On monotone instances the dual optimum puts no mass on interior
/// multipliers: true iff lambda_n <= tol for all n = 2..N-1.
bool lemma1_check(const DualPoint& dp, const LinkGains& gains, double tol = 1e-4);

} // namespace relay

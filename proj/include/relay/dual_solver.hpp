#pragma once

#include <span>
#include <vector>

#include "relay/ellipsoid.hpp"
#include "relay/error.hpp"
#include "relay/phy_channel.hpp"
#include "relay/waterfill.hpp"

namespace relay {

// One finite-horizon allocation problem: per-slot gains plus total energy
// budgets. By convention the source never transmits at slot N and the relay
// never transmits at slot 1, so the decision variables are p_s over slots
// 1..N-1 and (p_r, R_r) over slots 2..N.
struct ProblemInstance {
    LinkGains gains;
    double e_s = 0.0;
    double e_r = 0.0;

    int n_slots() const { return gains.n_slots(); }
    void validate() const;

    /// Gains of the source decision slots 1..N-1.
    std::span<const double> source_gains() const;
    /// Gains of the relay decision slots 2..N.
    std::span<const double> relay_gains() const;
};

// Multipliers lambda_2..lambda_N of the information-causality constraints,
// stored as lambda[j] = lambda_{j+2}. Dual feasibility is lambda >= 0 and
// sum(lambda) <= 1.
struct DualPoint {
    std::vector<double> lambda;

    /// Source weights beta_n = sum_{i=n+1..N} lambda_i, n = 1..N-1.
    std::vector<double> beta() const;
    /// Relay weights nu_n = 1 - sum_{i=n..N} lambda_i, n = 2..N.
    std::vector<double> nu() const;
    bool feasible(double tol = 0.0) const;
};

struct DualEvaluation {
    double g_value = 0.0;
    WfResult source_alloc; ///< weighted WF on source slots with weights beta
    WfResult relay_alloc;  ///< weighted WF on relay slots with weights nu
    /// Subgradient s_n = sum_{i<n} R_s[i] - sum_{2<=i<=n} R_r[i], n = 2..N.
    std::vector<double> subgrad;
};

enum class CaseTag { case1, case2, case3, closed_form, oracle };

const char* case_tag_name(CaseTag tag);

// Full primal allocation. p_s/r_s cover slots 1..N-1, p_r/r_r slots 2..N,
// buffer[m] is B[m+1] = data received minus forwarded after slot m+1.
struct Solution {
    std::vector<double> p_s, r_s;
    std::vector<double> p_r, r_r;
    std::vector<double> buffer;
    std::vector<double> source_levels; ///< effective water level per source slot
    std::vector<double> relay_levels;  ///< effective water level per relay slot
    std::vector<double> lambda;        ///< dual multipliers (general path only)
    double objective = 0.0;            ///< sum of relay rates
    double throughput = 0.0;           ///< objective / N
    CaseTag case_tag = CaseTag::case3;
    double gap = 0.0;                  ///< best known dual value minus objective
    bool converged = true;
};

struct SolverOptions {
    double ellipsoid_tol = 1e-6;
    long ellipsoid_iter_factor = 500; ///< iteration cap = factor * (N-1)^2
    double eps_case = 1e-6;
    double feasibility_tol = 1e-6;
    double gap_rel_tol = 1e-3;
    bool polish = true; ///< Newton refinement of case-1 multipliers
};

/// Evaluates the dual function at a feasible point: two weighted
/// water-fillings (all-zero weights yield the all-zero allocation), the dual
/// value g = sum beta_n R_s[n] + sum nu_n R_r[n], and the subgradient.
DualEvaluation evaluate_dual(const ProblemInstance& inst, const DualPoint& dp);

struct DualSolveResult {
    DualPoint point;
    double g_value = 0.0;
    bool converged = false;
    long iterations = 0;
};

/// Minimizes the dual function over the feasible multiplier set with the
/// ellipsoid method.
DualSolveResult ellipsoid_minimize(const ProblemInstance& inst, const SolverOptions& opts = {});

/// Cases 1-3 of the optimal-structure analysis; the beta_1 = nu_N = 0
/// combination cannot occur and raises case_inconsistency.
CaseTag classify_case(const DualPoint& dp, double eps_case);

/// Case 1 (both weight vectors strictly positive): the water-filling
/// allocations at the dual optimum are primal optimal. Relay rates are
/// clamped slot-by-slot to the available buffer so the returned solution is
/// causality-feasible exactly.
Solution recover_case1(const ProblemInstance& inst, const DualPoint& dp, const SolverOptions& opts = {});

/// Case 2 (source side is the bottleneck): source uses classic WF with full
/// budget; the relay forwards every received bit with the minimum-energy
/// schedule subject to the buffer-content caps. A nested dual over the prefix
/// constraints cross-checks the reduced problem value.
Solution recover_case2(const ProblemInstance& inst, const DualPoint& dp, const SolverOptions& opts = {});

/// Case 3 (relay side is the bottleneck): relay uses classic WF with full
/// budget; the source meets the induced prefix demands with minimum energy.
Solution recover_case3(const ProblemInstance& inst, const DualPoint& dp, const SolverOptions& opts = {});

/// Full pipeline: Theorem-1 closed form when the instance is monotone,
/// otherwise dual minimization, case classification and recovery.
Solution solve(const ProblemInstance& inst, const SolverOptions& opts = {});

/// Dual pipeline unconditionally (skips the closed-form dispatch).
Solution solve_general(const ProblemInstance& inst, const SolverOptions& opts = {});

/// Minimum-energy schedule meeting cumulative rate demands: pick the deadline
/// needing the highest water level, fill its segment at exactly that level,
/// repeat. Demands are prefix lower bounds sum_{i<=n} r[i] >= demands[n]; any
/// schedule meeting the binding deadline spends at least the water-filling
/// power over those slots, so the greedy segment choice is optimal.
/// Per-slot levels are written to slot_levels when non-null.
WfResult min_power_schedule(std::span<const double> gains, std::span<const double> demands,
                            std::vector<double>* slot_levels = nullptr);

} // namespace relay

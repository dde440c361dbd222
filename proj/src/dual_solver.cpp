#include "relay/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "relay/closed_form.hpp"

namespace relay {

namespace {

constexpr double kTinyRel = 1e-12;

std::vector<double> prefix_sums(std::span<const double> v) {
    std::vector<double> out(v.size(), 0.0);
    double running = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        running += v[i];
        out[i] = running;
    }
    return out;
}

// Weighted WF with the all-zero-weight and zero-budget degeneracies resolved
// to the all-zero allocation (any allocation maximizes a zero-weight sum; the
// zero one is the minimal representative).
WfResult allocate(std::span<const double> gains, std::span<const double> weights, double budget) {
    const double max_weight = weights.empty() ? 0.0 : *std::max_element(weights.begin(), weights.end());
    if (budget <= 0.0 || max_weight <= 0.0) {
        WfResult zero;
        zero.powers.assign(gains.size(), 0.0);
        zero.rates.assign(gains.size(), 0.0);
        return zero;
    }
    return weighted_wf(gains, weights, budget);
}

// ---------------------------------------------------------------------------
// Case-1 polish: Newton refinement of the active multipliers so the buffer
// clears exactly wherever lambda_n > 0 (complementary slackness). The
// ellipsoid localizes lambda*, the polish removes the residual primal
// infeasibility that a merely epsilon-accurate dual point leaves behind.
// ---------------------------------------------------------------------------

// Solves A x = b in place with partial pivoting; returns false when singular.
bool solve_linear(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row) {
            if (std::abs(a[static_cast<size_t>(row) * n + col]) >
                std::abs(a[static_cast<size_t>(pivot) * n + col])) {
                pivot = row;
            }
        }
        if (std::abs(a[static_cast<size_t>(pivot) * n + col]) < 1e-14) {
            return false;
        }
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a[static_cast<size_t>(col) * n + j], a[static_cast<size_t>(pivot) * n + j]);
            }
            std::swap(b[static_cast<size_t>(col)], b[static_cast<size_t>(pivot)]);
        }
        const double inv = 1.0 / a[static_cast<size_t>(col) * n + col];
        for (int row = col + 1; row < n; ++row) {
            const double factor = a[static_cast<size_t>(row) * n + col] * inv;
            if (factor == 0.0) {
                continue;
            }
            for (int j = col; j < n; ++j) {
                a[static_cast<size_t>(row) * n + j] -= factor * a[static_cast<size_t>(col) * n + j];
            }
            b[static_cast<size_t>(row)] -= factor * b[static_cast<size_t>(col)];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        double acc = b[static_cast<size_t>(row)];
        for (int j = row + 1; j < n; ++j) {
            acc -= a[static_cast<size_t>(row) * n + j] * b[static_cast<size_t>(j)];
        }
        b[static_cast<size_t>(row)] = acc / a[static_cast<size_t>(row) * n + row];
    }
    return true;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (const double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

struct PolishOutcome {
    DualPoint point;
    double g_value = 0.0;
    bool improved = false;
};

PolishOutcome polish_case1_impl(const ProblemInstance& inst, const DualPoint& start,
                                const SolverOptions& opts, PolishOutcome out) {
    const int m = static_cast<int>(start.lambda.size());
    const double scale = 1.0 + std::abs(out.g_value);
    const double residual_tol = 1e-11 * scale;
    const double slack_tol = 1e-9 * scale;

    const double max_lambda = max_abs(start.lambda);
    if (max_lambda <= 0.0) {
        return out;
    }

    std::vector<int> active;
    for (int j = 0; j < m; ++j) {
        if (start.lambda[static_cast<size_t>(j)] > std::max(opts.eps_case, 1e-3 * max_lambda)) {
            active.push_back(j);
        }
    }
    if (active.empty()) {
        return out;
    }

    std::vector<double> lambda = start.lambda;
    auto residuals = [&](const std::vector<double>& lam, const std::vector<int>& act,
                         std::vector<double>* full) -> std::vector<double> {
        DualPoint dp{lam};
        const DualEvaluation eval = evaluate_dual(inst, dp);
        if (full) {
            *full = eval.subgrad;
        }
        std::vector<double> r(act.size(), 0.0);
        for (size_t t = 0; t < act.size(); ++t) {
            r[t] = eval.subgrad[static_cast<size_t>(act[t])];
        }
        return r;
    };

    for (int outer = 0; outer < 2 * m + 4; ++outer) {
        const int k = static_cast<int>(active.size());
        if (k == 0) {
            break;
        }
        std::vector<double> f = residuals(lambda, active, nullptr);
        bool newton_ok = true;

        for (int iter = 0; iter < 30 && max_abs(f) > residual_tol; ++iter) {
            // multipliers pinned at zero belong to the inactive set; let the
            // outer loop re-form it
            bool pinned = false;
            for (const int j : active) {
                pinned = pinned || lambda[static_cast<size_t>(j)] <= 1e-12;
            }
            if (pinned) {
                break;
            }

            // forward-difference Jacobian (backward near the sum(lambda)=1 face)
            std::vector<double> jac(static_cast<size_t>(k) * static_cast<size_t>(k), 0.0);
            const double lam_sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
            for (int col = 0; col < k; ++col) {
                const int j = active[static_cast<size_t>(col)];
                double h = std::max(1e-8, 1e-6 * lambda[static_cast<size_t>(j)]);
                if (lam_sum + h > 1.0 - 1e-12) {
                    h = -std::min(h, 0.5 * lambda[static_cast<size_t>(j)]);
                }
                std::vector<double> shifted = lambda;
                shifted[static_cast<size_t>(j)] += h;
                const std::vector<double> f_shift = residuals(shifted, active, nullptr);
                for (int row = 0; row < k; ++row) {
                    jac[static_cast<size_t>(row) * k + col] =
                        (f_shift[static_cast<size_t>(row)] - f[static_cast<size_t>(row)]) / h;
                }
            }
            std::vector<double> step(f.begin(), f.end());
            for (double& s : step) {
                s = -s;
            }
            if (!solve_linear(jac, step, k)) {
                newton_ok = false;
                break;
            }

            // damped update, clamped to the feasible multiplier set
            bool progressed = false;
            for (double alpha = 1.0; alpha > 1e-6; alpha *= 0.5) {
                std::vector<double> candidate = lambda;
                for (int t = 0; t < k; ++t) {
                    const int j = active[static_cast<size_t>(t)];
                    candidate[static_cast<size_t>(j)] =
                        std::max(0.0, candidate[static_cast<size_t>(j)] + alpha * step[static_cast<size_t>(t)]);
                }
                double cand_sum = std::accumulate(candidate.begin(), candidate.end(), 0.0);
                if (cand_sum > 1.0 - 1e-12) {
                    const double shrink = (1.0 - 1e-12) / cand_sum;
                    for (double& l : candidate) {
                        l *= shrink;
                    }
                }
                const std::vector<double> f_cand = residuals(candidate, active, nullptr);
                if (max_abs(f_cand) < max_abs(f) * (1.0 - 1e-4 * alpha) ||
                    max_abs(f_cand) <= residual_tol) {
                    lambda = candidate;
                    f = f_cand;
                    progressed = true;
                    break;
                }
            }
            if (!progressed) {
                newton_ok = false;
                break;
            }
        }

        if (!newton_ok && max_abs(f) > residual_tol) {
            return out; // keep the ellipsoid point
        }

        // active-set corrections: drop multipliers pinned at zero, add slots
        // whose causality constraint went negative
        std::vector<int> next_active;
        bool changed = false;
        for (const int j : active) {
            if (lambda[static_cast<size_t>(j)] > 1e-12) {
                next_active.push_back(j);
            } else {
                lambda[static_cast<size_t>(j)] = 0.0;
                changed = true;
            }
        }
        std::vector<double> full;
        residuals(lambda, active, &full);
        for (int j = 0; j < m; ++j) {
            if (std::find(next_active.begin(), next_active.end(), j) == next_active.end() &&
                full[static_cast<size_t>(j)] < -slack_tol) {
                next_active.push_back(j);
                changed = true;
            }
        }
        std::sort(next_active.begin(), next_active.end());
        if (!changed && max_abs(f) <= residual_tol) {
            DualPoint refined{lambda};
            const DualEvaluation eval = evaluate_dual(inst, refined);
            // accept only if it does not worsen the dual value
            if (eval.g_value <= out.g_value + 1e-9 * scale) {
                out.point = refined;
                out.g_value = eval.g_value;
                out.improved = true;
            }
            return out;
        }
        if (next_active.empty()) {
            break;
        }
        active = std::move(next_active);
    }
    return out;
}

// Best-effort refinement: any numerical failure inside the Newton iteration
// simply keeps the ellipsoid point.
PolishOutcome polish_case1(const ProblemInstance& inst, const DualPoint& start,
                           const SolverOptions& opts) {
    PolishOutcome base;
    base.point = start;
    base.g_value = evaluate_dual(inst, start).g_value;
    try {
        return polish_case1_impl(inst, start, opts, base);
    } catch (const SolverError&) {
        return base;
    }
}

// Relay rates clamped slot-by-slot to the buffer content. For fixed powers
// this maximizes the forwarded total, since sending earlier never reduces
// later feasibility.
std::vector<double> greedy_causal_rates(std::span<const double> source_rates,
                                        std::span<const double> raw_relay_rates) {
    std::vector<double> out(raw_relay_rates.size(), 0.0);
    double supplied = 0.0;
    double forwarded = 0.0;
    for (size_t j = 0; j < raw_relay_rates.size(); ++j) {
        supplied += source_rates[j];
        const double available = supplied - forwarded;
        out[j] = std::min(raw_relay_rates[j], std::max(0.0, available));
        forwarded += out[j];
    }
    return out;
}

void finalize_solution(const ProblemInstance& inst, Solution& sol) {
    const int n = inst.n_slots();
    sol.buffer.assign(static_cast<size_t>(n), 0.0);
    double supplied = 0.0;
    double forwarded = 0.0;
    // B[1] = 0; B[n] = sum_{i<=n-1} r_s - sum_{2<=i<=n} r_r
    for (int slot = 2; slot <= n; ++slot) {
        supplied += sol.r_s[static_cast<size_t>(slot) - 2];
        forwarded += sol.r_r[static_cast<size_t>(slot) - 2];
        sol.buffer[static_cast<size_t>(slot) - 1] = supplied - forwarded;
    }
    sol.objective = std::accumulate(sol.r_r.begin(), sol.r_r.end(), 0.0);
    sol.throughput = sol.objective / n;
}

} // namespace

void ProblemInstance::validate() const {
    if (gains.g_sr.size() != gains.g_rd.size()) {
        throw SolverError(ErrorCode::dimension_mismatch, "g_sr and g_rd differ in length");
    }
    if (n_slots() < 2) {
        throw SolverError(ErrorCode::invalid_parameter, "instance needs at least 2 slots");
    }
    for (size_t i = 0; i < gains.g_sr.size(); ++i) {
        if (!(gains.g_sr[i] > 0.0) || !(gains.g_rd[i] > 0.0) ||
            !std::isfinite(gains.g_sr[i]) || !std::isfinite(gains.g_rd[i])) {
            throw SolverError(ErrorCode::invalid_parameter, "link gains must be strictly positive");
        }
    }
    if (!(e_s >= 0.0) || !(e_r >= 0.0) || !std::isfinite(e_s) || !std::isfinite(e_r)) {
        throw SolverError(ErrorCode::invalid_parameter, "energy budgets must be non-negative");
    }
}

std::span<const double> ProblemInstance::source_gains() const {
    return std::span<const double>(gains.g_sr).first(gains.g_sr.size() - 1);
}

std::span<const double> ProblemInstance::relay_gains() const {
    return std::span<const double>(gains.g_rd).subspan(1);
}

std::vector<double> DualPoint::beta() const {
    std::vector<double> out(lambda.size(), 0.0);
    double suffix = 0.0;
    for (size_t j = lambda.size(); j-- > 0;) {
        suffix += lambda[j];
        out[j] = suffix;
    }
    return out;
}

std::vector<double> DualPoint::nu() const {
    std::vector<double> out(lambda.size(), 0.0);
    double suffix = 0.0;
    for (size_t j = lambda.size(); j-- > 0;) {
        suffix += lambda[j];
        out[j] = 1.0 - suffix;
    }
    return out;
}

bool DualPoint::feasible(double tol) const {
    double sum = 0.0;
    for (const double l : lambda) {
        if (l < -tol) {
            return false;
        }
        sum += l;
    }
    return sum <= 1.0 + tol;
}

const char* case_tag_name(CaseTag tag) {
    switch (tag) {
        case CaseTag::case1: return "case1";
        case CaseTag::case2: return "case2";
        case CaseTag::case3: return "case3";
        case CaseTag::closed_form: return "closed_form";
        case CaseTag::oracle: return "oracle";
    }
    return "unknown";
}

DualEvaluation evaluate_dual(const ProblemInstance& inst, const DualPoint& dp) {
    const int m = inst.n_slots() - 1;
    if (static_cast<int>(dp.lambda.size()) != m) {
        throw SolverError(ErrorCode::dimension_mismatch, "dual point has wrong dimension");
    }
    if (!dp.feasible(kTinyRel)) {
        throw SolverError(ErrorCode::invalid_parameter, "dual point violates lambda >= 0, sum <= 1");
    }

    DualEvaluation eval;
    const std::vector<double> beta = dp.beta();
    const std::vector<double> nu = dp.nu();
    eval.source_alloc = allocate(inst.source_gains(), beta, inst.e_s);
    eval.relay_alloc = allocate(inst.relay_gains(), nu, inst.e_r);

    eval.g_value = 0.0;
    for (int j = 0; j < m; ++j) {
        eval.g_value += beta[static_cast<size_t>(j)] * eval.source_alloc.rates[static_cast<size_t>(j)];
        eval.g_value += nu[static_cast<size_t>(j)] * eval.relay_alloc.rates[static_cast<size_t>(j)];
    }

    const std::vector<double> ps = prefix_sums(eval.source_alloc.rates);
    const std::vector<double> pr = prefix_sums(eval.relay_alloc.rates);
    eval.subgrad.resize(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        eval.subgrad[static_cast<size_t>(j)] = ps[static_cast<size_t>(j)] - pr[static_cast<size_t>(j)];
    }
    return eval;
}

DualSolveResult ellipsoid_minimize(const ProblemInstance& inst, const SolverOptions& opts) {
    inst.validate();
    const int m = inst.n_slots() - 1;

    EllipsoidOptions eopts;
    eopts.stop_tol = opts.ellipsoid_tol;
    eopts.max_iterations = opts.ellipsoid_iter_factor * static_cast<long>(m) * static_cast<long>(m);

    const auto oracle = [&](const std::vector<double>& lambda) {
        const DualEvaluation eval = evaluate_dual(inst, DualPoint{lambda});
        return CutInfo{eval.g_value, eval.subgrad};
    };
    const EllipsoidResult res = ellipsoid_minimize(m, oracle, eopts);

    DualSolveResult out;
    out.point.lambda = res.x;
    out.g_value = res.value;
    out.converged = res.converged;
    out.iterations = res.iterations;
    return out;
}

CaseTag classify_case(const DualPoint& dp, double eps_case) {
    if (dp.lambda.empty()) {
        throw SolverError(ErrorCode::invalid_parameter, "empty dual point");
    }
    const double beta_1 = std::accumulate(dp.lambda.begin(), dp.lambda.end(), 0.0);
    const double nu_n = 1.0 - dp.lambda.back();
    const bool source_active = beta_1 > eps_case;
    const bool relay_active = nu_n > eps_case;
    if (source_active && relay_active) {
        return CaseTag::case1;
    }
    if (source_active) {
        return CaseTag::case2;
    }
    if (relay_active) {
        return CaseTag::case3;
    }
    throw SolverError(ErrorCode::case_inconsistency,
                      "beta_1 and nu_N both vanish; this case cannot occur");
}

Solution recover_case1(const ProblemInstance& inst, const DualPoint& dp, const SolverOptions& opts) {
    const int n = inst.n_slots();
    DualPoint refined = dp;
    if (opts.polish) {
        refined = polish_case1(inst, dp, opts).point;
    }
    const DualEvaluation eval = evaluate_dual(inst, refined);

    // residual causality violation before the clamp; large values mean the
    // dual point is not accurate enough to recover from
    double worst = 0.0;
    for (const double s : eval.subgrad) {
        worst = std::max(worst, -s);
    }
    const double scale = 1.0 + eval.relay_alloc.total_rate();
    if (worst > 1e-3 * scale) {
        throw SolverError(ErrorCode::recovery_failure,
                          "case-1 recovery: causality residual too large at the dual point");
    }

    Solution sol;
    sol.case_tag = CaseTag::case1;
    sol.lambda = refined.lambda;
    sol.p_s = eval.source_alloc.powers;
    sol.r_s = eval.source_alloc.rates;
    sol.p_r = eval.relay_alloc.powers;
    sol.r_r = greedy_causal_rates(sol.r_s, eval.relay_alloc.rates);

    const std::vector<double> beta = refined.beta();
    const std::vector<double> nu = refined.nu();
    sol.source_levels.resize(static_cast<size_t>(n) - 1);
    sol.relay_levels.resize(static_cast<size_t>(n) - 1);
    for (size_t j = 0; j + 1 < static_cast<size_t>(n); ++j) {
        sol.source_levels[j] = eval.source_alloc.water_level * beta[j];
        sol.relay_levels[j] = eval.relay_alloc.water_level * nu[j];
    }

    finalize_solution(inst, sol);
    sol.gap = eval.g_value - sol.objective;
    return sol;
}

Solution recover_case2(const ProblemInstance& inst, const DualPoint& dp, const SolverOptions& opts) {
    const int n = inst.n_slots();
    const int m = n - 1;

    const WfResult src = allocate(inst.source_gains(),
                                  std::vector<double>(static_cast<size_t>(m), 1.0), inst.e_s);
    const std::vector<double> caps = prefix_sums(src.rates); // buffer-content caps C_n
    const double total_supply = caps.empty() ? 0.0 : caps.back();

    // Nested dual over the prefix-cap multipliers; same feasible set and
    // engine as the outer problem. Used as a value cross-check: the reduced
    // problem optimum equals the supplied total when the classification holds.
    double nested_value = total_supply;
    bool nested_converged = true;
    if (total_supply > 0.0) {
        const auto oracle = [&](const std::vector<double>& mu) {
            double suffix = 0.0;
            std::vector<double> weights(static_cast<size_t>(m), 0.0);
            for (size_t j = mu.size(); j-- > 0;) {
                suffix += mu[j];
                weights[j] = 1.0 - suffix;
            }
            const WfResult rel = allocate(inst.relay_gains(), weights, inst.e_r);
            CutInfo info;
            info.value = 0.0;
            info.subgrad.resize(static_cast<size_t>(m));
            double forwarded = 0.0;
            for (int j = 0; j < m; ++j) {
                info.value += weights[static_cast<size_t>(j)] * rel.rates[static_cast<size_t>(j)] +
                              mu[static_cast<size_t>(j)] * caps[static_cast<size_t>(j)];
                forwarded += rel.rates[static_cast<size_t>(j)];
                info.subgrad[static_cast<size_t>(j)] = caps[static_cast<size_t>(j)] - forwarded;
            }
            return info;
        };
        EllipsoidOptions eopts;
        eopts.stop_tol = opts.ellipsoid_tol;
        eopts.max_iterations = opts.ellipsoid_iter_factor * static_cast<long>(m) * static_cast<long>(m);
        const EllipsoidResult nested = ellipsoid_minimize(m, oracle, eopts);
        nested_value = nested.value;
        nested_converged = nested.converged;
    }

    // Exact allocation: deliver the full supply with minimum energy. In
    // reversed time the buffer caps become prefix demands, which the segment
    // scheduler meets exactly.
    std::vector<double> rev_gains(static_cast<size_t>(m), 0.0);
    std::vector<double> rev_demands(static_cast<size_t>(m), 0.0);
    const auto relay_g = inst.relay_gains();
    for (int k = 0; k < m; ++k) {
        rev_gains[static_cast<size_t>(k)] = relay_g[static_cast<size_t>(m - 1 - k)];
        rev_demands[static_cast<size_t>(k)] =
            k < m - 1 ? total_supply - caps[static_cast<size_t>(m - 2 - k)] : total_supply;
    }
    std::vector<double> rev_levels;
    const WfResult sched = min_power_schedule(rev_gains, rev_demands, &rev_levels);
    if (sched.total_power() > inst.e_r * (1.0 + 1e-9) + 1e-12) {
        throw SolverError(ErrorCode::recovery_failure,
                          "case-2 recovery: relay energy cannot forward the full source supply");
    }

    Solution sol;
    sol.case_tag = CaseTag::case2;
    sol.lambda = dp.lambda;
    sol.p_s = src.powers;
    sol.r_s = src.rates;
    sol.p_r.assign(static_cast<size_t>(m), 0.0);
    sol.r_r.assign(static_cast<size_t>(m), 0.0);
    sol.relay_levels.assign(static_cast<size_t>(m), 0.0);
    for (int j = 0; j < m; ++j) {
        sol.p_r[static_cast<size_t>(j)] = sched.powers[static_cast<size_t>(m - 1 - j)];
        sol.r_r[static_cast<size_t>(j)] = sched.rates[static_cast<size_t>(m - 1 - j)];
        sol.relay_levels[static_cast<size_t>(j)] = rev_levels[static_cast<size_t>(m - 1 - j)];
    }
    sol.source_levels.assign(static_cast<size_t>(m), src.water_level);

    finalize_solution(inst, sol);
    // lambda = e_N is always dual feasible and evaluates to the source supply
    sol.gap = total_supply - sol.objective;
    sol.converged = nested_converged &&
                    std::abs(nested_value - sol.objective) <= std::max(1e-6, 1e-4 * (1.0 + sol.objective));
    return sol;
}

Solution recover_case3(const ProblemInstance& inst, const DualPoint& dp, const SolverOptions& opts) {
    (void)opts;
    const int n = inst.n_slots();
    const int m = n - 1;

    const WfResult rel = allocate(inst.relay_gains(),
                                  std::vector<double>(static_cast<size_t>(m), 1.0), inst.e_r);
    const std::vector<double> demands = prefix_sums(rel.rates);

    std::vector<double> src_levels;
    const WfResult sched = min_power_schedule(inst.source_gains(), demands, &src_levels);
    if (sched.total_power() > inst.e_s * (1.0 + 1e-9) + 1e-12) {
        throw SolverError(ErrorCode::recovery_failure,
                          "case-3 recovery: source energy cannot feed the relay schedule");
    }

    Solution sol;
    sol.case_tag = CaseTag::case3;
    sol.lambda = dp.lambda;
    sol.p_s = sched.powers;
    sol.r_s = sched.rates;
    sol.p_r = rel.powers;
    sol.r_r = rel.rates;
    sol.source_levels = src_levels;
    sol.relay_levels.assign(static_cast<size_t>(m), rel.water_level);

    finalize_solution(inst, sol);
    // lambda = 0 is dual feasible and evaluates to the full-budget relay rate
    sol.gap = rel.total_rate() - sol.objective;
    return sol;
}

namespace {

// Ellipsoid with an interleaved polish attempt: whenever the incumbent looks
// like case 1, Newton-refine it; a refined point with vanishing active
// residuals and non-negative slacks is a KKT point of the convex dual, i.e.
// the exact optimum, so the ellipsoid can stop early. This keeps large
// strongly-coupled instances (reverse flights with hundreds of slots) out of
// the ellipsoid's Omega(d^2) tail without touching its stopping rule.
DualSolveResult dual_phase(const ProblemInstance& inst, const SolverOptions& opts) {
    inst.validate();
    const int m = inst.n_slots() - 1;

    EllipsoidOptions eopts;
    eopts.stop_tol = opts.ellipsoid_tol;
    eopts.max_iterations = opts.ellipsoid_iter_factor * static_cast<long>(m) * static_cast<long>(m);

    PolishOutcome certified;
    bool has_certified = false;
    if (opts.polish && m >= 2) {
        eopts.progress_every = std::max<long>(1000, 25L * m);
        eopts.progress = [&](const EllipsoidResult& snapshot) {
            const DualPoint candidate{snapshot.x};
            const double beta_1 = std::accumulate(snapshot.x.begin(), snapshot.x.end(), 0.0);
            const double nu_n = 1.0 - snapshot.x.back();
            if (beta_1 <= opts.eps_case || nu_n <= opts.eps_case) {
                return false;
            }
            PolishOutcome outcome = polish_case1(inst, candidate, opts);
            if (outcome.improved) {
                certified = std::move(outcome);
                has_certified = true;
                return true;
            }
            return false;
        };
    }

    const auto oracle = [&](const std::vector<double>& lambda) {
        const DualEvaluation eval = evaluate_dual(inst, DualPoint{lambda});
        return CutInfo{eval.g_value, eval.subgrad};
    };
    const EllipsoidResult res = ellipsoid_minimize(m, oracle, eopts);

    DualSolveResult out;
    if (res.stopped_by_callback && has_certified) {
        out.point = certified.point;
        out.g_value = certified.g_value;
        out.converged = true;
    } else {
        out.point.lambda = res.x;
        out.g_value = res.value;
        out.converged = res.converged;
    }
    out.iterations = res.iterations;
    return out;
}

Solution solve_general_once(const ProblemInstance& inst, const SolverOptions& opts) {
    const DualSolveResult dual = dual_phase(inst, opts);
    const CaseTag tag = classify_case(dual.point, opts.eps_case);

    Solution sol;
    switch (tag) {
        case CaseTag::case1: sol = recover_case1(inst, dual.point, opts); break;
        case CaseTag::case2: sol = recover_case2(inst, dual.point, opts); break;
        default: sol = recover_case3(inst, dual.point, opts); break;
    }
    // tightest certified dual value available
    sol.gap = std::min(sol.gap, dual.g_value - sol.objective);
    sol.converged = sol.converged && dual.converged;
    return sol;
}

} // namespace

Solution solve_general(const ProblemInstance& inst, const SolverOptions& opts) {
    inst.validate();
    SolverOptions attempt = opts;
    for (int round = 0;; ++round) {
        try {
            Solution sol = solve_general_once(inst, attempt);
            if (sol.gap > attempt.gap_rel_tol * std::max(1.0, std::abs(sol.objective)) && round == 0) {
                attempt.ellipsoid_tol = opts.ellipsoid_tol / 10.0; // one retry, tighter dual
                continue;
            }
            if (sol.gap > attempt.gap_rel_tol * std::max(1.0, std::abs(sol.objective))) {
                sol.converged = false;
            }
            return sol;
        } catch (const SolverError& err) {
            const bool retryable = err.code() == ErrorCode::recovery_failure ||
                                   err.code() == ErrorCode::case_inconsistency;
            if (!retryable || round > 0) {
                throw;
            }
            attempt.ellipsoid_tol = opts.ellipsoid_tol / 10.0;
        }
    }
}

Solution solve(const ProblemInstance& inst, const SolverOptions& opts) {
    inst.validate();
    if (is_monotone_instance(inst.gains)) {
        return solve_monotone(inst);
    }
    return solve_general(inst, opts);
}

WfResult min_power_schedule(std::span<const double> gains, std::span<const double> demands,
                            std::vector<double>* slot_levels) {
    if (gains.size() != demands.size()) {
        throw SolverError(ErrorCode::dimension_mismatch, "gains and demands differ in length");
    }
    for (const double g : gains) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw SolverError(ErrorCode::invalid_parameter, "gains must be strictly positive");
        }
    }

    const size_t n = gains.size();
    WfResult out;
    out.powers.assign(n, 0.0);
    out.rates.assign(n, 0.0);
    if (slot_levels) {
        slot_levels->assign(n, 0.0);
    }
    if (n == 0) {
        return out;
    }

    // prefix demands are cumulative; enforce monotonicity once
    std::vector<double> dem(demands.begin(), demands.end());
    for (size_t i = 1; i < n; ++i) {
        dem[i] = std::max(dem[i], dem[i - 1]);
    }
    if (dem.back() <= 0.0) {
        return out;
    }

    // level such that classic WF over gains[first..last] yields `rate`;
    // returns the upper bisection endpoint so demands are met with >=
    const auto level_for_rate = [&gains](size_t first, size_t last, double rate) {
        const auto total_rate = [&](double level) {
            double r = 0.0;
            for (size_t i = first; i <= last; ++i) {
                const double term = level * gains[i];
                if (term > 1.0) {
                    r += std::log2(term);
                }
            }
            return r;
        };
        double g_max = 0.0;
        for (size_t i = first; i <= last; ++i) {
            g_max = std::max(g_max, gains[i]);
        }
        double hi = 2.0 / g_max;
        for (int grow = 0; grow < 4000 && total_rate(hi) < rate; ++grow) {
            hi *= 2.0;
        }
        double lo = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (total_rate(mid) >= rate) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return hi;
    };

    double delivered = 0.0;
    size_t start = 0;
    while (start < n) {
        // most binding remaining deadline = highest required water level
        double best_level = 0.0;
        size_t best_end = n; // sentinel: nothing binding
        for (size_t end = start; end < n; ++end) {
            const double need = dem[end] - delivered;
            if (need <= 1e-15 * (1.0 + std::abs(dem[end]))) {
                continue;
            }
            const double level = level_for_rate(start, end, need);
            if (best_end == n || level > best_level * (1.0 + 1e-12)) {
                best_level = level;
                best_end = end;
            } else if (level >= best_level * (1.0 - 1e-12)) {
                best_end = end; // merge near-equal segments
            }
        }
        if (best_end == n) {
            break; // every remaining demand already covered
        }
        for (size_t i = start; i <= best_end; ++i) {
            const double p = best_level - 1.0 / gains[i];
            if (p > 0.0) {
                out.powers[i] = p;
                out.rates[i] = std::log2(1.0 + p * gains[i]);
                delivered += out.rates[i];
            }
            if (slot_levels) {
                (*slot_levels)[i] = best_level;
            }
        }
        start = best_end + 1;
    }
    out.water_level = n > 0 && slot_levels && !slot_levels->empty() ? slot_levels->front() : 0.0;
    return out;
}

} // namespace relay

#pragma once

#include <functional>
#include <vector>

namespace relay {

// Objective value and a subgradient at a feasible query point.
struct CutInfo {
    double value = 0.0;
    std::vector<double> subgrad;
};

struct EllipsoidResult {
    std::vector<double> x; ///< best feasible center seen
    double value = 0.0;
    bool converged = false;
    bool stopped_by_callback = false;
    long iterations = 0;
};

struct EllipsoidOptions {
    double stop_tol = 1e-6;  ///< stop when sqrt(s' P s) drops below this
    long max_iterations = 0; ///< 0 selects the default cap 500 * dim^2
    /// Invoked every progress_every iterations with the best point so far;
    /// returning true stops the minimization early (e.g. when the caller has
    /// certified optimality by other means).
    long progress_every = 0;
    std::function<bool(const EllipsoidResult&)> progress;
};

/// Minimizes a convex function over {x >= 0, sum(x) <= 1} with the ellipsoid
/// method: feasibility cuts outside the set, subgradient cuts inside. The
/// initial ellipsoid is a ball of radius sqrt(dim+1) centered at x = 1/(2*dim).
/// When the iteration cap is hit the best center seen so far is returned with
/// converged = false.
EllipsoidResult ellipsoid_minimize(int dim,
                                   const std::function<CutInfo(const std::vector<double>&)>& oracle,
                                   const EllipsoidOptions& opts = {});

} // namespace relay

#include "relay/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace relay {

namespace {

// Row-major symmetric d x d matrix in a flat buffer.
inline double& at(std::vector<double>& m, int d, int i, int j) {
    return m[static_cast<size_t>(i) * static_cast<size_t>(d) + static_cast<size_t>(j)];
}

inline double at(const std::vector<double>& m, int d, int i, int j) {
    return m[static_cast<size_t>(i) * static_cast<size_t>(d) + static_cast<size_t>(j)];
}

} // namespace

EllipsoidResult ellipsoid_minimize(int dim,
                                   const std::function<CutInfo(const std::vector<double>&)>& oracle,
                                   const EllipsoidOptions& opts) {
    const int d = dim;
    EllipsoidResult result;
    if (d < 1) {
        return result;
    }
    const long cap = opts.max_iterations > 0 ? opts.max_iterations
                                             : 500L * static_cast<long>(d) * static_cast<long>(d);

    std::vector<double> center(static_cast<size_t>(d), 1.0 / (2.0 * d));
    std::vector<double> shape(static_cast<size_t>(d) * static_cast<size_t>(d), 0.0);
    for (int i = 0; i < d; ++i) {
        at(shape, d, i, i) = static_cast<double>(d) + 1.0; // ball of radius sqrt(d+1)
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> cut(static_cast<size_t>(d), 0.0);
    std::vector<double> pa(static_cast<size_t>(d), 0.0);

    long k = 0;
    for (; k < cap; ++k) {
        if (opts.progress && opts.progress_every > 0 && k > 0 && k % opts.progress_every == 0 &&
            !result.x.empty()) {
            result.iterations = k;
            result.value = best;
            if (opts.progress(result)) {
                result.stopped_by_callback = true;
                return result;
            }
        }
        // feasibility cuts keep the iterate inside {x >= 0, sum <= 1}
        int violated = -1;
        double most_negative = 0.0;
        double sum = 0.0;
        for (int i = 0; i < d; ++i) {
            sum += center[static_cast<size_t>(i)];
            if (center[static_cast<size_t>(i)] < most_negative) {
                most_negative = center[static_cast<size_t>(i)];
                violated = i;
            }
        }
        if (violated >= 0) {
            std::fill(cut.begin(), cut.end(), 0.0);
            cut[static_cast<size_t>(violated)] = -1.0;
        } else if (sum > 1.0) {
            std::fill(cut.begin(), cut.end(), 1.0);
        } else {
            const CutInfo info = oracle(center);
            if (!std::isfinite(info.value)) {
                break;
            }
            if (info.value < best) {
                best = info.value;
                result.x = center;
            }
            cut = info.subgrad;
            double quad = 0.0; // cut' P cut
            for (int i = 0; i < d; ++i) {
                double row = 0.0;
                for (int j = 0; j < d; ++j) {
                    row += at(shape, d, i, j) * cut[static_cast<size_t>(j)];
                }
                quad += row * cut[static_cast<size_t>(i)];
            }
            if (quad < 0.0) {
                break; // shape matrix lost positive definiteness
            }
            if (std::sqrt(quad) <= opts.stop_tol) {
                result.converged = true;
                ++k;
                break;
            }
        }

        // ellipsoid update along the cut direction
        double quad = 0.0;
        for (int i = 0; i < d; ++i) {
            double row = 0.0;
            for (int j = 0; j < d; ++j) {
                row += at(shape, d, i, j) * cut[static_cast<size_t>(j)];
            }
            pa[static_cast<size_t>(i)] = row;
            quad += row * cut[static_cast<size_t>(i)];
        }
        if (!(quad > 1e-300)) {
            break; // collapsed
        }

        if (d == 1) {
            // interval halving
            const double radius = std::sqrt(shape[0]);
            center[0] -= (cut[0] > 0.0 ? radius : -radius) * 0.5;
            shape[0] *= 0.25;
            continue;
        }

        const double inv_norm = 1.0 / std::sqrt(quad);
        const double dd = static_cast<double>(d);
        const double grow = dd * dd / (dd * dd - 1.0);
        const double rank1 = 2.0 / (dd + 1.0);
        for (int i = 0; i < d; ++i) {
            pa[static_cast<size_t>(i)] *= inv_norm;
        }
        for (int i = 0; i < d; ++i) {
            center[static_cast<size_t>(i)] -= pa[static_cast<size_t>(i)] / (dd + 1.0);
        }
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                const double v = grow * (at(shape, d, i, j) -
                                         rank1 * pa[static_cast<size_t>(i)] * pa[static_cast<size_t>(j)]);
                at(shape, d, i, j) = v;
                at(shape, d, j, i) = v;
            }
        }
    }

    result.iterations = k;
    result.value = best;
    if (result.x.empty()) {
        // initial center is feasible, so this only happens with a broken oracle
        result.x.assign(static_cast<size_t>(d), 1.0 / (2.0 * d));
        result.value = oracle(result.x).value;
    }
    return result;
}

} // namespace relay

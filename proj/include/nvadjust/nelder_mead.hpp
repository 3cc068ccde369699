#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nvadjust {

/**
 * Box-constrained maximization problem for the Nelder-Mead simplex solver.
 *
 * The objective must return finite values everywhere inside the box. Trial
 * points that leave the box are clamped componentwise before evaluation, so
 * the returned argmax always satisfies the constraints exactly.
 */
struct OptimizeProblem {
    std::function<double(std::span<const double>)> objective; // maximized
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> init;
    double tolerance = 1e-6; // simplex objective-value spread threshold
    std::size_t max_evals = 0; // 0 -> 500 * dimension
    int restarts = 1;
    /// Optional explicit starting simplex (dimension+1 points). When empty a
    /// deterministic simplex is built from init with per-dimension offsets of
    /// 5% of the box width, reflected inward at the boundary.
    std::vector<std::vector<double>> initial_simplex;
};

struct OptimizeResult {
    std::vector<double> argmax;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/**
 * Nelder-Mead with reflection 1, expansion 2, contraction 0.5, shrink 0.5.
 * Deterministic: no internal randomness. The result never falls below the
 * objective at init. Throws NumericError if the objective returns a
 * non-finite value.
 */
OptimizeResult maximize(const OptimizeProblem& problem);

} // namespace nvadjust

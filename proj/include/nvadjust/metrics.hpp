#pragma once

#include "nvadjust/adjust.hpp"
#include "nvadjust/demand_sim.hpp"
#include "nvadjust/newsvendor.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nvadjust {

/**
 * Percentage profit loss against the ex-post optimal order x = d:
 * 100 * (profit(d,d) - profit(x,d)) / profit(d,d). Always >= 0.
 * Throws std::domain_error when the baseline profit (p-v)*d is not positive.
 */
double ppl(const CostParams& costs, double order, double demand);

/**
 * Relative profit improvement of the adjusted order over the textbook order,
 * 1 - PPL(x)/PPL(x*). Empty when PPL(x*) = 0 (the textbook order was exactly
 * ex-post optimal, so the ratio is undefined); such periods are excluded and
 * counted by the aggregation.
 */
std::optional<double> rpi(const CostParams& costs, double order, double order_star,
                          double demand);

/// Fraction of evaluated periods whose order covered demand (x_t >= d_t).
double service_level(const OrderTrajectory& trajectory, const DemandSeries& series);

struct PeriodMetrics {
    std::size_t t = 0;
    double x_star = 0.0;
    double x = 0.0;
    double demand = 0.0;
    double ppl_star = 0.0;
    double ppl_x = 0.0;
    std::optional<double> rpi;
};

/// Per-period evaluation of one series, the unit of aggregation.
struct RunRecord {
    int series_id = 0;
    std::vector<PeriodMetrics> periods;
};

RunRecord evaluate_trajectory(const CostParams& costs, const OrderTrajectory& trajectory,
                              const DemandSeries& series);

/// Inclusive 1-based period range [first, last].
struct Window {
    std::size_t first = 0;
    std::size_t last = 0;
};

/**
 * Cross-series RPI summary over a period window.
 *
 * `mean` is the profit-weighted form 1 - sum(PPL(x)) / sum(PPL(x*)) over the
 * included (series, period) samples: the per-period RPI ratio has no finite
 * expectation (its denominator can be arbitrarily close to zero), so the
 * pooled ratio is the statistic that stabilises as samples accumulate. The
 * order statistics describe the raw per-period ratios and are robust to
 * those tails. Periods with PPL(x*) = 0 are excluded from both and counted.
 */
struct RpiSummary {
    double mean = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    std::size_t n = 0;
    std::size_t n_excluded = 0;
};

RpiSummary aggregate(std::span<const RunRecord> records, Window window);

/// Quantile of a sample by inclusive linear interpolation (h = (n-1)p).
/// `values` need not be sorted; p in [0, 1].
double sample_quantile(std::vector<double> values, double p);

} // namespace nvadjust

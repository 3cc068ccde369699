#include "nvadjust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nvadjust {

double ppl(const CostParams& costs, double order, double demand) {
    const double baseline = (costs.price - costs.cost) * demand;
    if (!(baseline > 0.0)) {
        throw std::domain_error("ppl: baseline profit (p-v)*d must be positive");
    }
    return 100.0 * (baseline - profit(costs, order, demand)) / baseline;
}

std::optional<double> rpi(const CostParams& costs, double order, double order_star,
                          double demand) {
    const double ppl_star = ppl(costs, order_star, demand);
    if (ppl_star == 0.0) {
        return std::nullopt;
    }
    return 1.0 - ppl(costs, order, demand) / ppl_star;
}

double service_level(const OrderTrajectory& trajectory, const DemandSeries& series) {
    if (trajectory.records.empty()) {
        throw std::invalid_argument("service_level: empty trajectory");
    }
    std::size_t covered = 0;
    for (const auto& rec : trajectory.records) {
        if (rec.t > series.values.size()) {
            throw std::invalid_argument("service_level: trajectory extends past the series");
        }
        if (rec.x >= series.values[rec.t - 1]) {
            ++covered;
        }
    }
    return static_cast<double>(covered) / static_cast<double>(trajectory.records.size());
}

RunRecord evaluate_trajectory(const CostParams& costs, const OrderTrajectory& trajectory,
                              const DemandSeries& series) {
    RunRecord record;
    record.series_id = series.series_id;
    record.periods.reserve(trajectory.records.size());
    for (const auto& rec : trajectory.records) {
        if (rec.t > series.values.size()) {
            throw std::invalid_argument("evaluate_trajectory: trajectory extends past the series");
        }
        const double d = series.values[rec.t - 1];
        PeriodMetrics pm;
        pm.t = rec.t;
        pm.x_star = rec.x_star;
        pm.x = rec.x;
        pm.demand = d;
        pm.ppl_star = ppl(costs, rec.x_star, d);
        pm.ppl_x = ppl(costs, rec.x, d);
        pm.rpi = pm.ppl_star == 0.0 ? std::nullopt
                                    : std::optional<double>(1.0 - pm.ppl_x / pm.ppl_star);
        record.periods.push_back(pm);
    }
    return record;
}

double sample_quantile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw std::invalid_argument("sample_quantile: empty sample");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("sample_quantile: p must lie in [0, 1]");
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = h - std::floor(h);
    return values[lo] + frac * (values[hi] - values[lo]);
}

RpiSummary aggregate(std::span<const RunRecord> records, Window window) {
    if (records.empty()) {
        throw std::invalid_argument("aggregate: no records");
    }
    if (window.first == 0 || window.last < window.first) {
        throw std::invalid_argument("aggregate: invalid window");
    }

    RpiSummary summary;
    double sum_ppl_x = 0.0;
    double sum_ppl_star = 0.0;
    std::vector<double> ratios;
    for (const auto& record : records) {
        for (const auto& pm : record.periods) {
            if (pm.t < window.first || pm.t > window.last) {
                continue;
            }
            if (!pm.rpi.has_value()) {
                ++summary.n_excluded;
                continue;
            }
            sum_ppl_x += pm.ppl_x;
            sum_ppl_star += pm.ppl_star;
            ratios.push_back(*pm.rpi);
        }
    }
    if (ratios.empty()) {
        throw std::invalid_argument("aggregate: window contains no defined RPI samples");
    }

    summary.n = ratios.size();
    summary.mean = 1.0 - sum_ppl_x / sum_ppl_star;
    summary.min = *std::min_element(ratios.begin(), ratios.end());
    summary.max = *std::max_element(ratios.begin(), ratios.end());
    summary.q1 = sample_quantile(ratios, 0.25);
    summary.median = sample_quantile(ratios, 0.5);
    summary.q3 = sample_quantile(ratios, 0.75);
    return summary;
}

} // namespace nvadjust

#pragma once

#include "nvadjust/demand_sim.hpp"
#include "nvadjust/forecast.hpp"
#include "nvadjust/newsvendor.hpp"

#include <cstddef>
#include <vector>

namespace nvadjust {

/// Strengths of the two adjustments: beta chases last period's demand,
/// gamma pulls the order towards the estimated mean.
struct AdjustmentParams {
    double beta = 0.0;
    double gamma = 0.0;
};

/// Closed box constraint for (beta, gamma); the conventional study range is
/// [0, 0.5] for both.
struct ParamBox {
    double beta_lo = 0.0;
    double beta_hi = 0.5;
    double gamma_lo = 0.0;
    double gamma_hi = 0.5;

    bool contains(const AdjustmentParams& p) const {
        return p.beta >= beta_lo && p.beta <= beta_hi && p.gamma >= gamma_lo &&
               p.gamma <= gamma_hi;
    }
    void validate() const;
};

/// Demand chasing: move the previous order towards the previous demand.
double dc_adjust(double x_prev, double d_prev, double beta);

/// Pull-to-centre: weighted average of the order and the estimated mean.
double ptc_adjust(double x_star, double mu_hat, double gamma);

/**
 * Two-stage adjustment collapsed into one step: pull-to-centre applied to the
 * textbook order, then the demand-chasing correction. Negative results are
 * clamped to zero and flagged.
 */
OrderDecision unified_adjust(double x_star, double mu_hat, double x_prev, double d_prev,
                             const AdjustmentParams& params);

struct OrderRecord {
    std::size_t t = 0;      // 1-based period
    double x_star = 0.0;    // textbook order
    double x_prime = 0.0;   // after pull-to-centre
    double x = 0.0;         // final adjusted order
    bool clamped = false;
};

/// Orders over one demand series; records cover t in [warmup+1, n] and the
/// recursion starts from x_warmup = d_warmup.
struct OrderTrajectory {
    std::size_t warmup = 0;
    std::vector<OrderRecord> records;
    std::size_t clamp_count = 0;
    std::size_t forecast_fallbacks = 0;
};

/**
 * Re-fits the forecaster each period on d_1..d_{t-1}, forms the textbook
 * order for the assumed family and applies the unified adjustment.
 */
OrderTrajectory simulate_orders(const DemandSeries& series, const ForecastModelSpec& forecaster,
                                const CostParams& costs, const AdjustmentParams& params,
                                DistFamily family = DistFamily::normal, std::size_t warmup = 20);

/**
 * Same trajectory computed from forecasts that are already available.
 * simulate_orders(series, f, ...) == apply_adjustments(forecast_profile(...),
 * series, ...); the split lets experiment runners sweep many (beta, gamma)
 * pairs without re-fitting.
 */
OrderTrajectory apply_adjustments(const ForecastProfile& profile, const DemandSeries& series,
                                  const CostParams& costs, const AdjustmentParams& params,
                                  DistFamily family = DistFamily::normal);

} // namespace nvadjust

#pragma once

#include "nvadjust/adjust.hpp"
#include "nvadjust/demand_sim.hpp"
#include "nvadjust/forecast.hpp"
#include "nvadjust/newsvendor.hpp"

#include <cstddef>

namespace nvadjust {

/// Settings for in-sample (beta, gamma) estimation.
struct TunerConfig {
    std::size_t train_end = 0; // s: last 1-based period entering the objective
    std::size_t warmup = 20;
    ParamBox box{};
    AdjustmentParams init{0.1, 0.1};
    /// Coarse presearch grid step over the box before the simplex refinement;
    /// 0 disables the presearch.
    double presearch_step = 0.05;
    /// Simplex spread threshold relative to the baseline profit magnitude.
    double tolerance = 1e-9;
    std::size_t max_evals = 0; // 0 -> optimizer default
    int restarts = 1;

    void validate() const;
};

struct TuneResult {
    AdjustmentParams params;
    double tuned_profit = 0.0;
    double baseline_profit = 0.0; // profit at (beta, gamma) = (0, 0)
    std::size_t evaluations = 0;
    bool converged = true;
};

/**
 * Realized profit of the adjusted order trajectory summed over periods
 * [warmup+1, train_end] — the tuning objective J(beta, gamma).
 */
double training_profit(const ForecastProfile& profile, const DemandSeries& series,
                       const CostParams& costs, const AdjustmentParams& params,
                       std::size_t train_end, DistFamily family = DistFamily::normal);

/**
 * Maximise J over the configured box with Nelder-Mead, seeded with a simplex
 * that contains (0, 0) as a vertex: whenever (0, 0) lies inside the box the
 * tuned profit can never fall below the unadjusted baseline. Deterministic.
 */
TuneResult tune_on_profile(const ForecastProfile& profile, const DemandSeries& series,
                           const CostParams& costs, const TunerConfig& cfg,
                           DistFamily family = DistFamily::normal);

/// Fits the forecast profile over the training window, then tunes on it.
TuneResult tune_parameters(const DemandSeries& series, const ForecastModelSpec& forecaster,
                           const CostParams& costs, const TunerConfig& cfg,
                           DistFamily family = DistFamily::normal);

} // namespace nvadjust

#pragma once

#include "nvadjust/adjust.hpp"
#include "nvadjust/forecast.hpp"
#include "nvadjust/metrics.hpp"
#include "nvadjust/newsvendor.hpp"
#include "nvadjust/table.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace nvadjust {

/// One product's demand history, periods contiguous and in order.
struct ProductSeries {
    std::string product;
    std::vector<double> demand;
    std::vector<std::string> period_labels; // original period column values
};

struct RealDataset {
    std::vector<ProductSeries> products;

    const ProductSeries& find(const std::string& product) const;
};

/**
 * Loads a demand CSV with header `product,period,demand`. Periods are ISO
 * dates (YYYY-MM-DD) or integers and must be strictly increasing and gap-free
 * per product; demand must be a non-negative decimal. Violations raise
 * DataError with the offending line number.
 */
RealDataset load_demand_csv(const std::string& path);
RealDataset read_demand_csv(std::istream& in, const std::string& origin);

struct ProductCosts {
    std::string product;
    CostParams costs;
};

struct RollingConfig {
    std::vector<ProductCosts> products;
    ForecastModelSpec forecaster = ForecastModelSpec::simple(ForecastKind::mean);
    double train_fraction = 0.6; // constant in-sample share of each series
    std::size_t warmup = 10;     // warm-up inside each training window
    bool tuning = true;
    bool retune_each_origin = true;
    DistFamily assumed_family = DistFamily::normal;
    ParamBox box{};
    AdjustmentParams tuner_init{0.1, 0.1};
    double presearch_step = 0.05;
    int restarts = 1;

    void validate() const;
};

struct OriginOutcome {
    std::size_t origin = 0; // 1-based period being forecast
    double x_star = 0.0;
    double x_tuned = 0.0;
    double demand = 0.0;
    double profit_star = 0.0;
    double profit_tuned = 0.0;
    std::optional<double> rpi;
    AdjustmentParams params;
};

struct ProductRollingResult {
    std::string product;
    double target_service = 0.0;
    double pre_service = 0.0;
    double tuned_service = 0.0;
    double in_rpi_mean = 0.0;  // averaged over origins, pooled within each window
    RpiSummary out_rpi;        // over origins
    std::vector<OriginOutcome> origins;
    std::size_t forecast_fallbacks = 0;
};

/**
 * Rolling-origin one-step evaluation with a constant-size training window
 * covering train_fraction of each series. At each origin the forecaster is
 * re-fit; with tuning enabled, (beta, gamma) are re-estimated on the window
 * and applied to the out-of-sample order. The demand-chasing term uses the
 * previous origin's adjusted order (first origin: the last training demand).
 */
std::vector<ProductRollingResult> run_rolling_origin(const RealDataset& data,
                                                     const RollingConfig& cfg,
                                                     unsigned threads = 1);

/// Emits rolling, service and rolling_summary tables; returns the paths.
std::vector<std::string> write_rolling_tables(const std::vector<ProductRollingResult>& results,
                                              const std::string& dir, OutputFormat format);

} // namespace nvadjust

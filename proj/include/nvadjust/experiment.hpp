#pragma once

#include "nvadjust/adjust.hpp"
#include "nvadjust/demand_sim.hpp"
#include "nvadjust/forecast.hpp"
#include "nvadjust/metrics.hpp"
#include "nvadjust/newsvendor.hpp"
#include "nvadjust/table.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nvadjust {

/**
 * A full simulation study: simulate n_series demand paths from the DGP,
 * produce rolling one-step forecasts with fit_model, sweep the adjustment
 * grid and the tau list, and aggregate RPI.
 */
struct ExperimentConfig {
    ArmaSpec dgp;
    std::size_t n_series = 500;
    std::size_t length = 200;
    std::vector<double> tau_values = {0.7};
    ForecastModelSpec fit_model = ForecastModelSpec::arma_spec(1, 1);
    std::vector<AdjustmentParams> adjustment_grid;
    std::vector<Window> windows = {{21, 110}, {111, 200}};
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";
    std::size_t warmup = 20;
    std::size_t snapshot_t = 21;           // fixed-t slice used for the per-tau summaries
    DistFamily assumed_family = DistFamily::normal;
    ParamBox box{};

    ExperimentConfig();
    void validate() const;
};

/// Representative costs reproducing a target critical quantile, normalised to
/// a unit margin: p - v = 1, c_h = c_s = 0, v = (1 - tau) / tau. PPL and RPI
/// are invariant to cost scaling, so the normalisation is without loss.
CostParams costs_from_tau(double tau);

struct GridCell {
    double beta = 0.0;
    double gamma = 0.0;
    double mean_rpi = 0.0;
    std::size_t n_excluded = 0;
};

struct WindowGrid {
    Window window;
    std::vector<GridCell> cells; // config grid order
};

struct LengthPoint {
    std::size_t t = 0;
    double beta = 0.0;
    double gamma = 0.0;
    double mean_rpi = 0.0;
};

struct TauRow {
    double tau = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    RpiSummary summary; // across series at snapshot_t
};

struct ExperimentResult {
    std::vector<WindowGrid> grids;        // first tau in tau_values
    std::vector<LengthPoint> length_curve; // first tau, every period past warm-up
    std::vector<TauRow> tau_rows;          // every tau at snapshot_t
    std::size_t forecast_fallbacks = 0;
    std::size_t failed_series = 0;
};

/// Deterministic for a fixed config: per-series work is independent, and
/// aggregation always runs in series order, so any thread count produces
/// bit-identical results.
ExperimentResult run_simulation_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

/// Emits rpi_grid, rpi_vs_length and rpi_tau into `dir`; returns the paths.
std::vector<std::string> write_experiment_tables(const ExperimentResult& result,
                                                 const std::string& dir, OutputFormat format);

} // namespace nvadjust

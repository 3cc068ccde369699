#include "nvadjust/experiment.hpp"

#include "nvadjust/errors.hpp"
#include "nvadjust/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace nvadjust {

namespace {

/// Default 6x6 parameter grid {0, 0.1, ..., 0.5}^2.
std::vector<AdjustmentParams> default_grid() {
    std::vector<AdjustmentParams> grid;
    for (int b = 0; b <= 5; ++b) {
        for (int g = 0; g <= 5; ++g) {
            grid.push_back({b / 10.0, g / 10.0});
        }
    }
    return grid;
}

struct PoolAcc {
    double sum_ppl_x = 0.0;
    double sum_ppl_star = 0.0;
    std::size_t n = 0;
    std::size_t n_excluded = 0;

    void add(double ppl_x, double ppl_star) {
        if (ppl_star == 0.0) {
            ++n_excluded;
            return;
        }
        sum_ppl_x += ppl_x;
        sum_ppl_star += ppl_star;
        ++n;
    }

    double mean_rpi() const { return n == 0 ? 0.0 : 1.0 - sum_ppl_x / sum_ppl_star; }
};

} // namespace

ExperimentConfig::ExperimentConfig() {
    dgp.mean = 10000.0;
    dgp.ar = {0.5};
    dgp.ma = {0.3};
    dgp.innovation_sd = 100.0;
    adjustment_grid = default_grid();
}

void ExperimentConfig::validate() const {
    dgp.validate();
    fit_model.validate();
    box.validate();
    if (n_series == 0) throw ConfigError("experiment: n_series must be at least 1");
    if (length <= warmup) throw ConfigError("experiment: length must exceed the warm-up");
    if (warmup < fit_model.min_history()) {
        throw ConfigError("experiment: warm-up is below the identifiability floor of " +
                          fit_model.name());
    }
    if (tau_values.empty()) throw ConfigError("experiment: tau_values must not be empty");
    for (double tau : tau_values) {
        if (!(tau > 0.0 && tau < 1.0)) {
            throw ConfigError("experiment: tau values must lie in (0, 1)");
        }
    }
    if (adjustment_grid.empty()) throw ConfigError("experiment: adjustment_grid is empty");
    for (const auto& p : adjustment_grid) {
        if (!box.contains(p)) {
            throw ConfigError("experiment: grid pair (" + format_double(p.beta) + ", " +
                              format_double(p.gamma) + ") lies outside the parameter box");
        }
    }
    if (windows.empty()) throw ConfigError("experiment: windows must not be empty");
    for (const auto& w : windows) {
        if (w.first <= warmup || w.last < w.first || w.last > length) {
            throw ConfigError("experiment: window [" + std::to_string(w.first) + ", " +
                              std::to_string(w.last) + "] must lie inside (warmup, length]");
        }
    }
    if (snapshot_t <= warmup || snapshot_t > length) {
        throw ConfigError("experiment: snapshot_t must lie inside (warmup, length]");
    }
}

CostParams costs_from_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw std::domain_error("costs_from_tau: tau must lie in (0, 1)");
    }
    CostParams costs;
    costs.cost = (1.0 - tau) / tau;
    costs.price = 1.0 + costs.cost;
    costs.holding = 0.0;
    costs.shortage = 0.0;
    return costs;
}

ExperimentResult run_simulation_experiment(const ExperimentConfig& cfg, unsigned threads) {
    cfg.validate();

    const std::vector<DemandSeries> batch =
        simulate_batch(cfg.dgp, cfg.n_series, cfg.length, cfg.master_seed);

    // Phase 1 (parallel): the expensive per-period re-fits. Forecasts do not
    // depend on tau or on the adjustment parameters, so each series is
    // profiled exactly once.
    std::vector<std::optional<ForecastProfile>> profiles(cfg.n_series);
    parallel_for_index(cfg.n_series, threads, [&](std::size_t i) {
        try {
            profiles[i] = forecast_profile(batch[i].values, cfg.fit_model, cfg.warmup);
        } catch (const std::exception&) {
            profiles[i] = std::nullopt; // counted below, run continues
        }
    });

    const std::size_t n_pairs = cfg.adjustment_grid.size();
    const std::size_t horizon = cfg.length - cfg.warmup;

    ExperimentResult result;
    for (const auto& profile : profiles) {
        if (profile) {
            result.forecast_fallbacks += profile->fallback_count;
        } else {
            ++result.failed_series;
        }
    }
    if (result.failed_series == cfg.n_series) {
        throw NumericError("experiment: every series failed to fit");
    }

    std::vector<std::vector<PoolAcc>> grid_acc(cfg.windows.size(),
                                               std::vector<PoolAcc>(n_pairs));
    std::vector<std::vector<PoolAcc>> length_acc(n_pairs, std::vector<PoolAcc>(horizon));
    std::vector<std::vector<PoolAcc>> tau_acc(cfg.tau_values.size(),
                                              std::vector<PoolAcc>(n_pairs));
    std::vector<std::vector<std::vector<double>>> tau_ratios(
        cfg.tau_values.size(), std::vector<std::vector<double>>(n_pairs));

    // Phase 2 (sequential, series order): cheap trajectory recursions and
    // deterministic aggregation.
    for (std::size_t i = 0; i < cfg.n_series; ++i) {
        if (!profiles[i]) continue;
        const ForecastProfile& profile = *profiles[i];
        const DemandSeries& series = batch[i];

        for (std::size_t ti = 0; ti < cfg.tau_values.size(); ++ti) {
            const CostParams costs = costs_from_tau(cfg.tau_values[ti]);
            for (std::size_t pi = 0; pi < n_pairs; ++pi) {
                const OrderTrajectory traj = apply_adjustments(
                    profile, series, costs, cfg.adjustment_grid[pi], cfg.assumed_family);
                const RunRecord record = evaluate_trajectory(costs, traj, series);

                for (const auto& pm : record.periods) {
                    if (ti == 0) {
                        for (std::size_t wi = 0; wi < cfg.windows.size(); ++wi) {
                            if (pm.t >= cfg.windows[wi].first && pm.t <= cfg.windows[wi].last) {
                                grid_acc[wi][pi].add(pm.ppl_x, pm.ppl_star);
                            }
                        }
                        length_acc[pi][pm.t - cfg.warmup - 1].add(pm.ppl_x, pm.ppl_star);
                    }
                    if (pm.t == cfg.snapshot_t) {
                        tau_acc[ti][pi].add(pm.ppl_x, pm.ppl_star);
                        if (pm.rpi.has_value()) {
                            tau_ratios[ti][pi].push_back(*pm.rpi);
                        }
                    }
                }
            }
        }
    }

    for (std::size_t wi = 0; wi < cfg.windows.size(); ++wi) {
        WindowGrid grid;
        grid.window = cfg.windows[wi];
        for (std::size_t pi = 0; pi < n_pairs; ++pi) {
            GridCell cell;
            cell.beta = cfg.adjustment_grid[pi].beta;
            cell.gamma = cfg.adjustment_grid[pi].gamma;
            cell.mean_rpi = grid_acc[wi][pi].mean_rpi();
            cell.n_excluded = grid_acc[wi][pi].n_excluded;
            grid.cells.push_back(cell);
        }
        result.grids.push_back(std::move(grid));
    }

    for (std::size_t k = 0; k < horizon; ++k) {
        for (std::size_t pi = 0; pi < n_pairs; ++pi) {
            LengthPoint pt;
            pt.t = cfg.warmup + 1 + k;
            pt.beta = cfg.adjustment_grid[pi].beta;
            pt.gamma = cfg.adjustment_grid[pi].gamma;
            pt.mean_rpi = length_acc[pi][k].mean_rpi();
            result.length_curve.push_back(pt);
        }
    }

    for (std::size_t ti = 0; ti < cfg.tau_values.size(); ++ti) {
        for (std::size_t pi = 0; pi < n_pairs; ++pi) {
            TauRow row;
            row.tau = cfg.tau_values[ti];
            row.beta = cfg.adjustment_grid[pi].beta;
            row.gamma = cfg.adjustment_grid[pi].gamma;
            auto& ratios = tau_ratios[ti][pi];
            row.summary.mean = tau_acc[ti][pi].mean_rpi();
            row.summary.n = tau_acc[ti][pi].n;
            row.summary.n_excluded = tau_acc[ti][pi].n_excluded;
            if (!ratios.empty()) {
                row.summary.min = *std::min_element(ratios.begin(), ratios.end());
                row.summary.max = *std::max_element(ratios.begin(), ratios.end());
                row.summary.q1 = sample_quantile(ratios, 0.25);
                row.summary.median = sample_quantile(ratios, 0.5);
                row.summary.q3 = sample_quantile(ratios, 0.75);
            }
            result.tau_rows.push_back(std::move(row));
        }
    }

    return result;
}

std::vector<std::string> write_experiment_tables(const ExperimentResult& result,
                                                 const std::string& dir, OutputFormat format) {
    std::vector<std::string> paths;

    Table grid({"window", "beta", "gamma", "mean_rpi", "n_excluded"});
    for (const auto& wg : result.grids) {
        const std::string label =
            std::to_string(wg.window.first) + "-" + std::to_string(wg.window.last);
        for (const auto& cell : wg.cells) {
            grid.begin_row()
                .cell(label)
                .cell(cell.beta)
                .cell(cell.gamma)
                .cell(cell.mean_rpi)
                .cell(cell.n_excluded);
        }
    }
    paths.push_back(grid.write(dir, "rpi_grid", format));

    Table curve({"t", "beta", "gamma", "mean_rpi"});
    for (const auto& pt : result.length_curve) {
        curve.begin_row().cell(pt.t).cell(pt.beta).cell(pt.gamma).cell(pt.mean_rpi);
    }
    paths.push_back(curve.write(dir, "rpi_vs_length", format));

    Table tau({"tau", "beta", "gamma", "min", "q1", "median", "q3", "max", "mean"});
    for (const auto& row : result.tau_rows) {
        tau.begin_row()
            .cell(row.tau)
            .cell(row.beta)
            .cell(row.gamma)
            .cell(row.summary.min)
            .cell(row.summary.q1)
            .cell(row.summary.median)
            .cell(row.summary.q3)
            .cell(row.summary.max)
            .cell(row.summary.mean);
    }
    paths.push_back(tau.write(dir, "rpi_tau", format));

    return paths;
}

} // namespace nvadjust

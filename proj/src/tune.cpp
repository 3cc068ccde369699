#include "nvadjust/tune.hpp"

#include "nvadjust/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nvadjust {

void TunerConfig::validate() const {
    box.validate();
    if (train_end < warmup + 2) {
        throw std::invalid_argument("TunerConfig: train_end must exceed warmup by at least 2");
    }
    if (!box.contains(init)) {
        throw std::invalid_argument("TunerConfig: init lies outside the box");
    }
    if (!(presearch_step >= 0.0)) {
        throw std::invalid_argument("TunerConfig: presearch step must be non-negative");
    }
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("TunerConfig: tolerance must be positive");
    }
}

double training_profit(const ForecastProfile& profile, const DemandSeries& series,
                       const CostParams& costs, const AdjustmentParams& params,
                       std::size_t train_end, DistFamily family) {
    const std::size_t warmup = profile.warmup;
    if (train_end <= warmup || train_end > series.values.size() ||
        train_end - warmup > profile.mu.size()) {
        throw std::invalid_argument("training_profit: window not covered by profile/series");
    }
    double x_prev = series.values[warmup - 1];
    double d_prev = x_prev;
    double total = 0.0;
    for (std::size_t t = warmup; t < train_end; ++t) {
        const std::size_t i = t - warmup;
        const OrderDecision star = textbook_order(profile.mu[i], profile.sigma[i], costs, family);
        const OrderDecision adj =
            unified_adjust(star.quantity, profile.mu[i], x_prev, d_prev, params);
        total += profit(costs, adj.quantity, series.values[t]);
        x_prev = adj.quantity;
        d_prev = series.values[t];
    }
    return total;
}

TuneResult tune_on_profile(const ForecastProfile& profile, const DemandSeries& series,
                           const CostParams& costs, const TunerConfig& cfg, DistFamily family) {
    cfg.validate();
    std::size_t extra_evals = 0;
    auto objective = [&](double beta, double gamma) {
        return training_profit(profile, series, costs, {beta, gamma}, cfg.train_end, family);
    };

    const double baseline = objective(0.0, 0.0);
    ++extra_evals;

    // Coarse grid presearch; the best cell seeds the simplex refinement.
    AdjustmentParams start = cfg.init;
    double start_value = objective(start.beta, start.gamma);
    ++extra_evals;
    if (cfg.presearch_step > 0.0) {
        for (double b = cfg.box.beta_lo; b <= cfg.box.beta_hi + 1e-12; b += cfg.presearch_step) {
            const double beta = std::min(b, cfg.box.beta_hi);
            for (double g = cfg.box.gamma_lo; g <= cfg.box.gamma_hi + 1e-12;
                 g += cfg.presearch_step) {
                const double gamma = std::min(g, cfg.box.gamma_hi);
                const double v = objective(beta, gamma);
                ++extra_evals;
                if (v > start_value) {
                    start_value = v;
                    start = {beta, gamma};
                }
            }
        }
    }

    OptimizeProblem problem;
    problem.objective = [&](std::span<const double> u) { return objective(u[0], u[1]); };
    problem.lower = {cfg.box.beta_lo, cfg.box.gamma_lo};
    problem.upper = {cfg.box.beta_hi, cfg.box.gamma_hi};
    problem.init = {start.beta, start.gamma};
    problem.tolerance = cfg.tolerance * std::max(1.0, std::fabs(baseline));
    problem.max_evals = cfg.max_evals;
    problem.restarts = cfg.restarts;

    // Simplex vertices: the unadjusted corner, the start point, and a third
    // point offset from the start to keep the simplex non-degenerate.
    const double zero_b = std::clamp(0.0, cfg.box.beta_lo, cfg.box.beta_hi);
    const double zero_g = std::clamp(0.0, cfg.box.gamma_lo, cfg.box.gamma_hi);
    const bool start_is_zero =
        std::fabs(start.beta - zero_b) < 1e-15 && std::fabs(start.gamma - zero_g) < 1e-15;
    if (!start_is_zero) {
        double hb = 0.05 * (cfg.box.beta_hi - cfg.box.beta_lo);
        double hg = 0.05 * (cfg.box.gamma_hi - cfg.box.gamma_lo);
        if (hb <= 0.0) hb = 0.05;
        if (hg <= 0.0) hg = 0.05;
        double third_b = start.beta + hb;
        if (third_b > cfg.box.beta_hi) third_b = start.beta - hb;
        double third_g = start.gamma - hg;
        if (third_g < cfg.box.gamma_lo) third_g = start.gamma + hg;
        problem.initial_simplex = {{zero_b, zero_g},
                                   {start.beta, start.gamma},
                                   {third_b, third_g}};
    }

    const OptimizeResult opt = maximize(problem);

    TuneResult result;
    result.params = {opt.argmax[0], opt.argmax[1]};
    result.tuned_profit = opt.value;
    result.baseline_profit = baseline;
    result.evaluations = opt.evaluations + extra_evals;
    result.converged = opt.converged;
    return result;
}

TuneResult tune_parameters(const DemandSeries& series, const ForecastModelSpec& forecaster,
                           const CostParams& costs, const TunerConfig& cfg, DistFamily family) {
    cfg.validate();
    if (cfg.train_end > series.values.size()) {
        throw std::invalid_argument("tune_parameters: training window exceeds the series");
    }
    const std::span<const double> window(series.values.data(), cfg.train_end);
    const ForecastProfile profile = forecast_profile(window, forecaster, cfg.warmup);
    return tune_on_profile(profile, series, costs, cfg, family);
}

} // namespace nvadjust

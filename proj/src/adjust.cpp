#include "nvadjust/adjust.hpp"

#include <cmath>
#include <stdexcept>

namespace nvadjust {

void ParamBox::validate() const {
    if (!(beta_lo <= beta_hi) || !(gamma_lo <= gamma_hi)) {
        throw std::invalid_argument("ParamBox: lower bound exceeds upper bound");
    }
    if (!std::isfinite(beta_lo) || !std::isfinite(beta_hi) || !std::isfinite(gamma_lo) ||
        !std::isfinite(gamma_hi)) {
        throw std::invalid_argument("ParamBox: bounds must be finite");
    }
}

double dc_adjust(double x_prev, double d_prev, double beta) {
    return x_prev + beta * (d_prev - x_prev);
}

double ptc_adjust(double x_star, double mu_hat, double gamma) {
    return (1.0 - gamma) * x_star + gamma * mu_hat;
}

OrderDecision unified_adjust(double x_star, double mu_hat, double x_prev, double d_prev,
                             const AdjustmentParams& params) {
    // Evaluated exactly as the two-stage form so the decomposition identity
    // holds bitwise.
    const double x_prime = ptc_adjust(x_star, mu_hat, params.gamma);
    const double x = x_prime + params.beta * (d_prev - x_prev);
    if (x < 0.0) {
        return {0.0, true};
    }
    return {x, false};
}

OrderTrajectory apply_adjustments(const ForecastProfile& profile, const DemandSeries& series,
                                  const CostParams& costs, const AdjustmentParams& params,
                                  DistFamily family) {
    const std::size_t warmup = profile.warmup;
    const std::size_t n = series.values.size();
    if (n <= warmup) {
        throw std::invalid_argument("apply_adjustments: series does not extend past the warm-up");
    }
    if (warmup == 0) {
        throw std::invalid_argument("apply_adjustments: warm-up must be at least 1");
    }
    if (profile.mu.size() != n - warmup) {
        throw std::invalid_argument("apply_adjustments: profile does not match the series length");
    }

    OrderTrajectory traj;
    traj.warmup = warmup;
    traj.forecast_fallbacks = profile.fallback_count;
    traj.records.reserve(n - warmup);

    double x_prev = series.values[warmup - 1]; // x_warmup = d_warmup
    double d_prev = series.values[warmup - 1];
    for (std::size_t t = warmup; t < n; ++t) {
        const std::size_t i = t - warmup;
        const OrderDecision star =
            textbook_order(profile.mu[i], profile.sigma[i], costs, family);
        const OrderDecision adjusted =
            unified_adjust(star.quantity, profile.mu[i], x_prev, d_prev, params);

        OrderRecord rec;
        rec.t = t + 1; // 1-based period
        rec.x_star = star.quantity;
        rec.x_prime = ptc_adjust(star.quantity, profile.mu[i], params.gamma);
        rec.x = adjusted.quantity;
        rec.clamped = star.clamped || adjusted.clamped;
        if (rec.clamped) ++traj.clamp_count;
        traj.records.push_back(rec);

        x_prev = adjusted.quantity;
        d_prev = series.values[t];
    }
    return traj;
}

OrderTrajectory simulate_orders(const DemandSeries& series, const ForecastModelSpec& forecaster,
                                const CostParams& costs, const AdjustmentParams& params,
                                DistFamily family, std::size_t warmup) {
    if (series.values.size() <= warmup) {
        throw std::invalid_argument("simulate_orders: series must be longer than the warm-up");
    }
    const ForecastProfile profile = forecast_profile(series.values, forecaster, warmup);
    return apply_adjustments(profile, series, costs, params, family);
}

} // namespace nvadjust

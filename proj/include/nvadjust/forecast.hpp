#pragma once

#include "nvadjust/newsvendor.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nvadjust {

enum class ForecastKind { arma, mean, seasonal_mean, seasonal_naive, ses, holt, auto_smoothing };

/// Which forecaster to run; p/q apply to arma, period to the seasonal kinds.
struct ForecastModelSpec {
    ForecastKind kind = ForecastKind::mean;
    int p = 0;
    int q = 0;
    int period = 7;

    void validate() const;
    std::size_t min_history() const;
    std::string name() const;

    static ForecastModelSpec arma_spec(int p, int q);
    static ForecastModelSpec simple(ForecastKind kind);
    static ForecastModelSpec seasonal(ForecastKind kind, int period);
};

/// One-step-ahead mean and standard-deviation estimate.
struct ForecastResult {
    double mu_hat = 0.0;
    double sigma_hat = 0.0;
    std::string model_info;
};

/**
 * ARMA(p,q) model fitted by conditional sum of squares:
 *   z_t = sum_i ar[i] z_{t-i} + e_t + sum_j ma[j] e_{t-j},  z_t = d_t - mean,
 * with zero pre-sample residuals. sigma is the innovation sd sqrt(CSS/n),
 * floored away from zero.
 */
struct ArmaModel {
    double mean = 0.0;
    std::vector<double> ar;
    std::vector<double> ma;
    double sigma = 0.0;
    double log_lik = 0.0;
    std::size_t n_obs = 0;
    bool fallback_mean_only = false;

    std::size_t n_params() const { return ar.size() + ma.size() + 2; }
    double aic() const { return 2.0 * static_cast<double>(n_params()) - 2.0 * log_lik; }
};

/**
 * Maximum (conditional Gaussian) likelihood ARMA fit via Nelder-Mead over an
 * unconstrained parameterisation: AR and MA coefficients are searched in
 * partial-autocorrelation space through tanh, so every candidate model is
 * stationary and invertible by construction.
 *
 * Requires history length >= max(20, 3*(p+q+2)). p = q = 0 reduces to the
 * closed-form mean model.
 */
ArmaModel fit_arma(std::span<const double> history, int p, int q);

/// One-step-ahead forecast from a fitted ARMA model over the given history.
ForecastResult forecast_arma(const ArmaModel& model, std::span<const double> history);

struct MeanModel {
    double mean = 0.0;
    double sigma = 0.0;
};

struct SeasonalMeanModel {
    int period = 0;
    std::vector<double> phase_means;
    double sigma = 0.0;
};

struct SeasonalNaiveModel {
    int period = 0;
    double sigma = 0.0;
};

struct SesModel {
    double alpha = 0.0;
    double level = 0.0; // smoothed level after the last observation
    double sigma = 0.0;
};

struct HoltModel {
    double alpha = 0.0;
    double beta = 0.0;
    double level = 0.0;
    double trend = 0.0;
    double sigma = 0.0;
};

/// A fitted forecaster of any supported kind, plus its AIC bookkeeping.
struct FittedModel {
    ForecastModelSpec spec; // concrete kind, never auto_smoothing
    std::variant<MeanModel, SeasonalMeanModel, SeasonalNaiveModel, SesModel, HoltModel, ArmaModel>
        model;
    double aic = 0.0;
    std::size_t n_params = 0;
};

FittedModel fit_model(const ForecastModelSpec& spec, std::span<const double> history);

ForecastResult forecast_fitted(const FittedModel& fitted, std::span<const double> history);

/// Fit-and-forecast in one call. auto_smoothing selects among
/// {mean, ses, holt} by AIC before forecasting.
ForecastResult forecast_one(const ForecastModelSpec& spec, std::span<const double> history);

/**
 * Fit every candidate and return the one with minimal AIC
 * (2k - 2 log-likelihood, Gaussian likelihood of one-step residuals).
 * Ties break towards fewer parameters, then earlier candidate order.
 * Candidates that fail to fit are skipped; throws NumericError if all fail.
 */
FittedModel auto_select(std::span<const double> history,
                        std::span<const ForecastModelSpec> candidates);

/// Convenience overload matching the order-decision call sites.
OrderDecision textbook_order(const ForecastResult& forecast, const CostParams& costs,
                             DistFamily family);

/**
 * Rolling one-step-ahead forecasts: entry i holds the forecast for period
 * warmup+1+i made from d_1..d_{warmup+i} (the model is re-fit every period).
 * ARMA fit failures fall back to the mean model and are counted.
 */
struct ForecastProfile {
    std::size_t warmup = 0;
    std::vector<double> mu;
    std::vector<double> sigma;
    std::size_t fallback_count = 0;
};

ForecastProfile forecast_profile(std::span<const double> demand, const ForecastModelSpec& spec,
                                 std::size_t warmup);

} // namespace nvadjust

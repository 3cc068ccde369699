#include "nvadjust/forecast.hpp"

#include "nvadjust/errors.hpp"
#include "nvadjust/nelder_mead.hpp"
#include "nvadjust/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace nvadjust {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

double floored_sigma(double sigma, double mu) {
    return std::max(sigma, 1e-6 * std::max(1.0, std::fabs(mu)));
}

/// Gaussian log-likelihood of residuals with the variance concentrated out.
double gaussian_log_lik(double sse, std::size_t n) {
    if (n == 0) return 0.0;
    const double sigma2 = std::max(sse / static_cast<double>(n), 1e-300);
    return -0.5 * static_cast<double>(n) * (std::log(kTwoPi * sigma2) + 1.0);
}

/// Residual sd with an n-1 denominator (sample-sd convention).
double residual_sd(double sse, std::size_t count) {
    return count >= 2 ? std::sqrt(sse / static_cast<double>(count - 1)) : 0.0;
}

/// Levinson recursion: partial autocorrelations (all inside (-1,1)) to the
/// coefficients of a stationary AR polynomial.
void pacf_to_coeffs(std::span<const double> pacf, std::vector<double>& out,
                    std::vector<double>& tmp) {
    out.clear();
    tmp.resize(pacf.size());
    for (std::size_t k = 0; k < pacf.size(); ++k) {
        tmp[k] = pacf[k];
        for (std::size_t j = 0; j < k; ++j) {
            tmp[j] = out[j] - pacf[k] * out[k - 1 - j];
        }
        out.assign(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(k + 1));
    }
}

/// Conditional-sum-of-squares evaluation for an ARMA(p,q) candidate, written
/// to avoid allocations inside the optimizer loop.
class CssEvaluator {
public:
    CssEvaluator(std::span<const double> data, std::size_t p, std::size_t q)
        : data_(data), p_(p), q_(q), resid_(data.size()), pacf_(std::max(p, q)) {}

    // u = [mean, ar pacf-space (p), ma pacf-space (q)]
    double log_lik(std::span<const double> u) {
        const double mean = u[0];
        for (std::size_t i = 0; i < p_; ++i) pacf_[i] = std::tanh(u[1 + i]);
        pacf_to_coeffs({pacf_.data(), p_}, phi_, lev_tmp_);
        for (std::size_t j = 0; j < q_; ++j) pacf_[j] = std::tanh(u[1 + p_ + j]);
        pacf_to_coeffs({pacf_.data(), q_}, theta_, lev_tmp_);
        for (double& t : theta_) t = -t; // invertible MA polynomial 1 + sum theta_j z^j

        const std::size_t n = data_.size();
        double css = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            double e = data_[t] - mean;
            const std::size_t ip = std::min(p_, t);
            for (std::size_t i = 0; i < ip; ++i) {
                e -= phi_[i] * (data_[t - 1 - i] - mean);
            }
            const std::size_t jq = std::min(q_, t);
            for (std::size_t j = 0; j < jq; ++j) {
                e -= theta_[j] * resid_[t - 1 - j];
            }
            resid_[t] = e;
            css += e * e;
        }
        css_ = css;
        return gaussian_log_lik(css, n);
    }

    double last_css() const { return css_; }
    const std::vector<double>& ar() const { return phi_; }
    const std::vector<double>& ma() const { return theta_; }

private:
    std::span<const double> data_;
    std::size_t p_;
    std::size_t q_;
    std::vector<double> resid_;
    std::vector<double> pacf_;
    std::vector<double> phi_;
    std::vector<double> theta_;
    std::vector<double> lev_tmp_;
    double css_ = 0.0;
};

ArmaModel fit_mean_only(std::span<const double> history) {
    ArmaModel model;
    model.mean = sample_mean(history);
    model.n_obs = history.size();
    double sse = 0.0;
    for (double d : history) sse += (d - model.mean) * (d - model.mean);
    model.sigma = floored_sigma(std::sqrt(sse / static_cast<double>(history.size())), model.mean);
    model.log_lik = gaussian_log_lik(sse, history.size());
    return model;
}

std::string format_arma_info(const ArmaModel& m) {
    char buf[160];
    std::string info = "arma(" + std::to_string(m.ar.size()) + "," + std::to_string(m.ma.size()) +
                       ")";
    std::snprintf(buf, sizeof(buf), " mean=%.6g sigma=%.6g", m.mean, m.sigma);
    info += buf;
    for (double c : m.ar) {
        std::snprintf(buf, sizeof(buf), " ar=%.6g", c);
        info += buf;
    }
    for (double c : m.ma) {
        std::snprintf(buf, sizeof(buf), " ma=%.6g", c);
        info += buf;
    }
    return info;
}

} // namespace

void ForecastModelSpec::validate() const {
    switch (kind) {
    case ForecastKind::arma:
        if (p < 0 || q < 0 || p + q < 1) {
            throw std::invalid_argument("ForecastModelSpec: arma requires p,q >= 0 and p+q >= 1");
        }
        break;
    case ForecastKind::seasonal_mean:
    case ForecastKind::seasonal_naive:
        if (period < 2) {
            throw std::invalid_argument("ForecastModelSpec: seasonal period must be >= 2");
        }
        break;
    default:
        break;
    }
}

std::size_t ForecastModelSpec::min_history() const {
    switch (kind) {
    case ForecastKind::arma:
        return std::max<std::size_t>(20, 3 * static_cast<std::size_t>(p + q + 2));
    case ForecastKind::mean:
        return 1;
    case ForecastKind::seasonal_mean:
    case ForecastKind::seasonal_naive:
        return static_cast<std::size_t>(period);
    case ForecastKind::ses:
        return 2;
    case ForecastKind::holt:
    case ForecastKind::auto_smoothing:
        return 3;
    }
    return 1;
}

std::string ForecastModelSpec::name() const {
    switch (kind) {
    case ForecastKind::arma:
        return "arma(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case ForecastKind::mean:
        return "mean";
    case ForecastKind::seasonal_mean:
        return "seasonal_mean(" + std::to_string(period) + ")";
    case ForecastKind::seasonal_naive:
        return "seasonal_naive(" + std::to_string(period) + ")";
    case ForecastKind::ses:
        return "ses";
    case ForecastKind::holt:
        return "holt";
    case ForecastKind::auto_smoothing:
        return "auto_smoothing";
    }
    return "unknown";
}

ForecastModelSpec ForecastModelSpec::arma_spec(int p, int q) {
    ForecastModelSpec s;
    s.kind = ForecastKind::arma;
    s.p = p;
    s.q = q;
    s.validate();
    return s;
}

ForecastModelSpec ForecastModelSpec::simple(ForecastKind kind) {
    ForecastModelSpec s;
    s.kind = kind;
    s.validate();
    return s;
}

ForecastModelSpec ForecastModelSpec::seasonal(ForecastKind kind, int period) {
    ForecastModelSpec s;
    s.kind = kind;
    s.period = period;
    s.validate();
    return s;
}

ArmaModel fit_arma(std::span<const double> history, int p, int q) {
    if (p < 0 || q < 0) {
        throw std::invalid_argument("fit_arma: negative model order");
    }
    const std::size_t floor_n = std::max<std::size_t>(20, 3 * static_cast<std::size_t>(p + q + 2));
    if (history.size() < floor_n) {
        throw std::invalid_argument("fit_arma: history shorter than identifiability floor");
    }
    if (p == 0 && q == 0) {
        return fit_mean_only(history);
    }

    const std::size_t dim = 1 + static_cast<std::size_t>(p + q);
    const double m0 = sample_mean(history);
    const auto [lo_it, hi_it] = std::minmax_element(history.begin(), history.end());
    const double range = std::max(*hi_it - *lo_it, 1e-9 * (1.0 + std::fabs(m0)));

    CssEvaluator evaluator(history, static_cast<std::size_t>(p), static_cast<std::size_t>(q));

    OptimizeProblem problem;
    problem.objective = [&evaluator](std::span<const double> u) { return evaluator.log_lik(u); };
    problem.lower.assign(dim, -5.0);
    problem.upper.assign(dim, 5.0);
    problem.lower[0] = m0 - 5.0 * range;
    problem.upper[0] = m0 + 5.0 * range;
    problem.init.assign(dim, 0.0);
    problem.init[0] = m0;
    problem.restarts = 1;

    const double f0 = evaluator.log_lik(problem.init);
    problem.tolerance = 1e-7 * (1.0 + std::fabs(f0));

    OptimizeResult best;
    bool solved = false;
    for (int attempt = 0; attempt < 3 && !solved; ++attempt) {
        try {
            best = maximize(problem);
            solved = true;
        } catch (const NumericError&) {
            if (attempt == 2) throw;
            // Deterministic perturbed restart.
            for (std::size_t i = 1; i < dim; ++i) {
                problem.init[i] = (attempt == 0) ? 0.2 : -0.2;
            }
        }
    }

    ArmaModel model;
    model.log_lik = evaluator.log_lik(best.argmax); // re-evaluate to refresh coefficients
    model.mean = best.argmax[0];
    model.ar = evaluator.ar();
    model.ma = evaluator.ma();
    model.n_obs = history.size();
    model.sigma = floored_sigma(
        std::sqrt(std::max(evaluator.last_css() / static_cast<double>(history.size()), 0.0)),
        model.mean);
    return model;
}

ForecastResult forecast_arma(const ArmaModel& model, std::span<const double> history) {
    const std::size_t n = history.size();
    if (n == 0) {
        throw std::invalid_argument("forecast_arma: history is empty");
    }
    const std::size_t p = model.ar.size();
    const std::size_t q = model.ma.size();

    std::vector<double> resid(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double e = history[t] - model.mean;
        for (std::size_t i = 0; i < std::min(p, t); ++i) {
            e -= model.ar[i] * (history[t - 1 - i] - model.mean);
        }
        for (std::size_t j = 0; j < std::min(q, t); ++j) {
            e -= model.ma[j] * resid[t - 1 - j];
        }
        resid[t] = e;
    }

    double pred = 0.0;
    for (std::size_t i = 0; i < std::min(p, n); ++i) {
        pred += model.ar[i] * (history[n - 1 - i] - model.mean);
    }
    for (std::size_t j = 0; j < std::min(q, n); ++j) {
        pred += model.ma[j] * resid[n - 1 - j];
    }

    ForecastResult result;
    result.mu_hat = model.mean + pred;
    result.sigma_hat = floored_sigma(model.sigma, result.mu_hat);
    result.model_info = format_arma_info(model);
    return result;
}

namespace {

FittedModel fit_mean_kind(std::span<const double> history) {
    MeanModel m;
    m.mean = sample_mean(history);
    m.sigma = sample_sd(history);
    double sse = 0.0;
    for (double d : history) sse += (d - m.mean) * (d - m.mean);
    FittedModel fitted;
    fitted.spec = ForecastModelSpec::simple(ForecastKind::mean);
    fitted.n_params = 2;
    fitted.aic = 2.0 * 2.0 - 2.0 * gaussian_log_lik(sse, history.size());
    fitted.model = m;
    return fitted;
}

FittedModel fit_seasonal_mean(std::span<const double> history, int period) {
    const auto m = static_cast<std::size_t>(period);
    SeasonalMeanModel model;
    model.period = period;
    model.phase_means.assign(m, 0.0);
    std::vector<std::size_t> counts(m, 0);
    for (std::size_t i = 0; i < history.size(); ++i) {
        model.phase_means[i % m] += history[i];
        ++counts[i % m];
    }
    for (std::size_t ph = 0; ph < m; ++ph) {
        if (counts[ph] > 0) model.phase_means[ph] /= static_cast<double>(counts[ph]);
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const double e = history[i] - model.phase_means[i % m];
        sse += e * e;
    }
    model.sigma = residual_sd(sse, history.size());
    FittedModel fitted;
    fitted.spec = ForecastModelSpec::seasonal(ForecastKind::seasonal_mean, period);
    fitted.n_params = m + 1;
    fitted.aic = 2.0 * static_cast<double>(m + 1) - 2.0 * gaussian_log_lik(sse, history.size());
    fitted.model = model;
    return fitted;
}

FittedModel fit_seasonal_naive(std::span<const double> history, int period) {
    const auto m = static_cast<std::size_t>(period);
    SeasonalNaiveModel model;
    model.period = period;
    double sse = 0.0;
    std::size_t count = 0;
    for (std::size_t i = m; i < history.size(); ++i) {
        const double e = history[i] - history[i - m];
        sse += e * e;
        ++count;
    }
    model.sigma = residual_sd(sse, count);
    FittedModel fitted;
    fitted.spec = ForecastModelSpec::seasonal(ForecastKind::seasonal_naive, period);
    fitted.n_params = 1;
    fitted.aic = 2.0 - 2.0 * gaussian_log_lik(sse, count);
    fitted.model = model;
    return fitted;
}

double ses_sse(std::span<const double> history, double alpha, double* final_level) {
    double level = history[0];
    double sse = 0.0;
    for (std::size_t i = 1; i < history.size(); ++i) {
        const double e = history[i] - level;
        sse += e * e;
        level += alpha * e;
    }
    if (final_level) *final_level = level;
    return sse;
}

FittedModel fit_ses(std::span<const double> history) {
    OptimizeProblem problem;
    problem.objective = [history](std::span<const double> u) {
        return -ses_sse(history, u[0], nullptr);
    };
    problem.lower = {1e-4};
    problem.upper = {1.0};
    problem.init = {0.3};
    const double sse0 = ses_sse(history, 0.3, nullptr);
    problem.tolerance = 1e-9 * (1.0 + sse0);
    const OptimizeResult opt = maximize(problem);

    SesModel model;
    model.alpha = opt.argmax[0];
    const double sse = ses_sse(history, model.alpha, &model.level);
    model.sigma = residual_sd(sse, history.size() - 1);
    FittedModel fitted;
    fitted.spec = ForecastModelSpec::simple(ForecastKind::ses);
    fitted.n_params = 3; // alpha, initial level, sigma
    fitted.aic = 2.0 * 3.0 - 2.0 * gaussian_log_lik(sse, history.size() - 1);
    fitted.model = model;
    return fitted;
}

double holt_sse(std::span<const double> history, double alpha, double beta, double* out_level,
                double* out_trend) {
    double level = history[0];
    double trend = history[1] - history[0];
    double sse = 0.0;
    for (std::size_t i = 1; i < history.size(); ++i) {
        const double pred = level + trend;
        const double e = history[i] - pred;
        sse += e * e;
        const double new_level = pred + alpha * e;
        trend += alpha * beta * e;
        level = new_level;
    }
    if (out_level) *out_level = level;
    if (out_trend) *out_trend = trend;
    return sse;
}

FittedModel fit_holt(std::span<const double> history) {
    OptimizeProblem problem;
    problem.objective = [history](std::span<const double> u) {
        return -holt_sse(history, u[0], u[1], nullptr, nullptr);
    };
    problem.lower = {1e-4, 1e-4};
    problem.upper = {1.0, 1.0};
    problem.init = {0.3, 0.1};
    const double sse0 = holt_sse(history, 0.3, 0.1, nullptr, nullptr);
    problem.tolerance = 1e-9 * (1.0 + sse0);
    const OptimizeResult opt = maximize(problem);

    HoltModel model;
    model.alpha = opt.argmax[0];
    model.beta = opt.argmax[1];
    const double sse = holt_sse(history, model.alpha, model.beta, &model.level, &model.trend);
    model.sigma = residual_sd(sse, history.size() - 1);
    FittedModel fitted;
    fitted.spec = ForecastModelSpec::simple(ForecastKind::holt);
    fitted.n_params = 5; // alpha, beta, initial level and trend, sigma
    fitted.aic = 2.0 * 5.0 - 2.0 * gaussian_log_lik(sse, history.size() - 1);
    fitted.model = model;
    return fitted;
}

} // namespace

FittedModel fit_model(const ForecastModelSpec& spec, std::span<const double> history) {
    spec.validate();
    if (history.size() < spec.min_history()) {
        throw std::invalid_argument("fit_model: insufficient history for " + spec.name());
    }
    switch (spec.kind) {
    case ForecastKind::mean:
        return fit_mean_kind(history);
    case ForecastKind::seasonal_mean:
        return fit_seasonal_mean(history, spec.period);
    case ForecastKind::seasonal_naive:
        return fit_seasonal_naive(history, spec.period);
    case ForecastKind::ses:
        return fit_ses(history);
    case ForecastKind::holt:
        return fit_holt(history);
    case ForecastKind::arma: {
        ArmaModel arma = fit_arma(history, spec.p, spec.q);
        FittedModel fitted;
        fitted.spec = spec;
        fitted.n_params = arma.n_params();
        fitted.aic = arma.aic();
        fitted.model = std::move(arma);
        return fitted;
    }
    case ForecastKind::auto_smoothing: {
        const ForecastModelSpec candidates[] = {ForecastModelSpec::simple(ForecastKind::mean),
                                                ForecastModelSpec::simple(ForecastKind::ses),
                                                ForecastModelSpec::simple(ForecastKind::holt)};
        return auto_select(history, candidates);
    }
    }
    throw std::invalid_argument("fit_model: unknown forecaster kind");
}

ForecastResult forecast_fitted(const FittedModel& fitted, std::span<const double> history) {
    if (history.empty()) {
        throw std::invalid_argument("forecast_fitted: history is empty");
    }
    ForecastResult result;
    if (const auto* m = std::get_if<MeanModel>(&fitted.model)) {
        result.mu_hat = m->mean;
        result.sigma_hat = m->sigma;
        result.model_info = "mean";
    } else if (const auto* m = std::get_if<SeasonalMeanModel>(&fitted.model)) {
        result.mu_hat = m->phase_means[history.size() % static_cast<std::size_t>(m->period)];
        result.sigma_hat = m->sigma;
        result.model_info = fitted.spec.name();
    } else if (const auto* m = std::get_if<SeasonalNaiveModel>(&fitted.model)) {
        const auto period = static_cast<std::size_t>(m->period);
        if (history.size() < period) {
            throw std::invalid_argument("forecast_fitted: history shorter than seasonal period");
        }
        result.mu_hat = history[history.size() - period];
        result.sigma_hat = m->sigma;
        result.model_info = fitted.spec.name();
    } else if (const auto* m = std::get_if<SesModel>(&fitted.model)) {
        result.mu_hat = m->level;
        result.sigma_hat = m->sigma;
        char buf[48];
        std::snprintf(buf, sizeof(buf), "ses alpha=%.4g", m->alpha);
        result.model_info = buf;
    } else if (const auto* m = std::get_if<HoltModel>(&fitted.model)) {
        result.mu_hat = m->level + m->trend;
        result.sigma_hat = m->sigma;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "holt alpha=%.4g beta=%.4g", m->alpha, m->beta);
        result.model_info = buf;
    } else {
        return forecast_arma(std::get<ArmaModel>(fitted.model), history);
    }
    result.sigma_hat = floored_sigma(result.sigma_hat, result.mu_hat);
    return result;
}

ForecastResult forecast_one(const ForecastModelSpec& spec, std::span<const double> history) {
    return forecast_fitted(fit_model(spec, history), history);
}

FittedModel auto_select(std::span<const double> history,
                        std::span<const ForecastModelSpec> candidates) {
    if (candidates.empty()) {
        throw std::invalid_argument("auto_select: no candidates");
    }
    bool have_best = false;
    FittedModel best;
    for (const auto& spec : candidates) {
        FittedModel fitted;
        try {
            fitted = fit_model(spec, history);
        } catch (const std::exception&) {
            continue;
        }
        const bool better =
            !have_best || fitted.aic < best.aic ||
            (fitted.aic == best.aic && fitted.n_params < best.n_params);
        if (better) {
            best = std::move(fitted);
            have_best = true;
        }
    }
    if (!have_best) {
        throw NumericError("auto_select: every candidate failed to fit");
    }
    return best;
}

OrderDecision textbook_order(const ForecastResult& forecast, const CostParams& costs,
                             DistFamily family) {
    return textbook_order(forecast.mu_hat, forecast.sigma_hat, costs, family);
}

ForecastProfile forecast_profile(std::span<const double> demand, const ForecastModelSpec& spec,
                                 std::size_t warmup) {
    spec.validate();
    if (warmup < spec.min_history()) {
        throw std::invalid_argument("forecast_profile: warm-up shorter than the identifiability "
                                    "floor of " +
                                    spec.name());
    }
    if (demand.size() <= warmup) {
        throw std::invalid_argument("forecast_profile: series does not extend past the warm-up");
    }

    ForecastProfile profile;
    profile.warmup = warmup;
    const std::size_t horizon = demand.size() - warmup;
    profile.mu.reserve(horizon);
    profile.sigma.reserve(horizon);
    const ForecastModelSpec mean_spec = ForecastModelSpec::simple(ForecastKind::mean);

    for (std::size_t t = warmup; t < demand.size(); ++t) {
        const std::span<const double> prefix = demand.subspan(0, t);
        ForecastResult f;
        try {
            f = forecast_one(spec, prefix);
        } catch (const NumericError&) {
            f = forecast_one(mean_spec, prefix);
            ++profile.fallback_count;
        }
        profile.mu.push_back(f.mu_hat);
        profile.sigma.push_back(f.sigma_hat);
    }
    return profile;
}

} // namespace nvadjust

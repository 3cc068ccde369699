#include "nvadjust/rolling.hpp"

#include "nvadjust/errors.hpp"
#include "nvadjust/parallel.hpp"
#include "nvadjust/tune.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace nvadjust {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's civil
// algorithm); used only to order and gap-check ISO-dated periods.
long days_from_civil(long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned long>(y - era * 400);
    const unsigned long doy = (153UL * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

bool parse_period(const std::string& text, long& out) {
    // ISO date YYYY-MM-DD
    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        long y = 0;
        unsigned m = 0;
        unsigned d = 0;
        try {
            y = std::stol(text.substr(0, 4));
            m = static_cast<unsigned>(std::stoul(text.substr(5, 2)));
            d = static_cast<unsigned>(std::stoul(text.substr(8, 2)));
        } catch (const std::exception&) {
            return false;
        }
        if (m < 1 || m > 12 || d < 1 || d > 31) return false;
        out = days_from_civil(y, m, d);
        return true;
    }
    try {
        std::size_t used = 0;
        out = std::stol(text, &used);
        return used == text.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

} // namespace

const ProductSeries& RealDataset::find(const std::string& product) const {
    for (const auto& p : products) {
        if (p.product == product) return p;
    }
    throw DataError("dataset has no product '" + product + "'");
}

RealDataset read_demand_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(origin + ": no rows");
    }
    {
        const auto header = split_csv_line(line);
        if (header != std::vector<std::string>{"product", "period", "demand"}) {
            throw DataError(origin + ":1: expected header 'product,period,demand'");
        }
    }

    struct Accum {
        ProductSeries series;
        long last_period = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, Accum> by_product;

    std::size_t line_no = 1;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        const std::string where = origin + ":" + std::to_string(line_no);
        if (fields.size() != 3) {
            throw DataError(where + ": expected 3 fields, got " + std::to_string(fields.size()));
        }
        const std::string& product = fields[0];
        if (product.empty()) {
            throw DataError(where + ": empty product id");
        }
        long period = 0;
        if (!parse_period(fields[1], period)) {
            throw DataError(where + ": cannot parse period '" + fields[1] + "'");
        }
        double demand = 0.0;
        try {
            std::size_t used = 0;
            demand = std::stod(fields[2], &used);
            if (used != fields[2].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw DataError(where + ": cannot parse demand '" + fields[2] + "'");
        }
        if (!(demand >= 0.0)) {
            throw DataError(where + ": demand must be non-negative");
        }

        auto [it, inserted] = by_product.try_emplace(product);
        if (inserted) {
            it->second.series.product = product;
            order.push_back(product);
        } else {
            if (period == it->second.last_period) {
                throw DataError(where + ": duplicate period for product '" + product + "'");
            }
            if (period < it->second.last_period) {
                throw DataError(where + ": periods must be strictly increasing per product");
            }
            if (period != it->second.last_period + 1) {
                throw DataError(where + ": gap in periods for product '" + product + "'");
            }
        }
        it->second.last_period = period;
        it->second.series.demand.push_back(demand);
        it->second.series.period_labels.push_back(fields[1]);
        ++rows;
    }
    if (rows == 0) {
        throw DataError(origin + ": no rows");
    }

    RealDataset data;
    for (const auto& product : order) {
        data.products.push_back(std::move(by_product[product].series));
    }
    return data;
}

RealDataset load_demand_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open demand CSV: " + path);
    }
    return read_demand_csv(in, path);
}

void RollingConfig::validate() const {
    if (products.empty()) {
        throw ConfigError("rolling: no products configured");
    }
    for (const auto& p : products) {
        p.costs.validate();
    }
    forecaster.validate();
    box.validate();
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("rolling: train_fraction must lie in (0, 1)");
    }
    if (warmup < forecaster.min_history()) {
        throw ConfigError("rolling: warm-up is below the identifiability floor of " +
                          forecaster.name());
    }
}

namespace {

ProductRollingResult evaluate_product(const ProductSeries& series, const CostParams& costs,
                                      const RollingConfig& cfg) {
    const std::size_t n = series.demand.size();
    const auto train_size = static_cast<std::size_t>(
        std::floor(cfg.train_fraction * static_cast<double>(n)));
    if (train_size < cfg.warmup + 2) {
        throw DataError("product '" + series.product +
                        "': training window too short for warm-up " + std::to_string(cfg.warmup));
    }
    if (n < train_size + 2) {
        throw DataError("product '" + series.product + "': needs at least 2 rolling origins");
    }

    ProductRollingResult result;
    result.product = series.product;
    result.target_service = critical_quantile(costs);

    TunerConfig tuner;
    tuner.train_end = train_size;
    tuner.warmup = cfg.warmup;
    tuner.box = cfg.box;
    tuner.init = cfg.tuner_init;
    tuner.presearch_step = cfg.presearch_step;
    tuner.restarts = cfg.restarts;

    AdjustmentParams params{0.0, 0.0};
    bool tuned_once = false;
    double in_rpi_sum = 0.0;
    std::size_t in_rpi_count = 0;

    double x_prev = series.demand[train_size - 1]; // x at the period before the first origin
    double d_prev = x_prev;

    double sum_ppl_tuned = 0.0;
    double sum_ppl_star = 0.0;
    std::size_t out_n = 0;
    std::size_t out_excluded = 0;
    std::vector<double> out_ratios;
    std::size_t covered_star = 0;
    std::size_t covered_tuned = 0;

    const ForecastModelSpec mean_spec = ForecastModelSpec::simple(ForecastKind::mean);

    for (std::size_t idx = train_size; idx < n; ++idx) {
        const std::span<const double> window(series.demand.data() + (idx - train_size),
                                             train_size);
        DemandSeries window_series;
        window_series.values.assign(window.begin(), window.end());

        if (cfg.tuning && (cfg.retune_each_origin || !tuned_once)) {
            const ForecastProfile profile =
                forecast_profile(window, cfg.forecaster, cfg.warmup);
            result.forecast_fallbacks += profile.fallback_count;
            const TuneResult tr =
                tune_on_profile(profile, window_series, costs, tuner, cfg.assumed_family);
            params = tr.params;
            tuned_once = true;

            // In-sample RPI of the tuned parameters over this window.
            const OrderTrajectory star_traj = apply_adjustments(
                profile, window_series, costs, {0.0, 0.0}, cfg.assumed_family);
            const OrderTrajectory tuned_traj =
                apply_adjustments(profile, window_series, costs, params, cfg.assumed_family);
            const RunRecord star_rec = evaluate_trajectory(costs, star_traj, window_series);
            const RunRecord tuned_rec = evaluate_trajectory(costs, tuned_traj, window_series);
            double ss = 0.0;
            double sx = 0.0;
            for (std::size_t k = 0; k < star_rec.periods.size(); ++k) {
                if (star_rec.periods[k].ppl_star == 0.0) continue;
                ss += star_rec.periods[k].ppl_star;
                sx += tuned_rec.periods[k].ppl_x;
            }
            if (ss > 0.0) {
                in_rpi_sum += 1.0 - sx / ss;
                ++in_rpi_count;
            }
        }

        ForecastResult forecast;
        try {
            forecast = forecast_one(cfg.forecaster, window);
        } catch (const NumericError&) {
            forecast = forecast_one(mean_spec, window);
            ++result.forecast_fallbacks;
        }
        const double x_star = textbook_order(forecast, costs, cfg.assumed_family).quantity;
        const double x_tuned =
            cfg.tuning
                ? unified_adjust(x_star, forecast.mu_hat, x_prev, d_prev, params).quantity
                : x_star;

        OriginOutcome outcome;
        outcome.origin = idx + 1;
        outcome.x_star = x_star;
        outcome.x_tuned = x_tuned;
        outcome.demand = series.demand[idx];
        outcome.profit_star = profit(costs, x_star, outcome.demand);
        outcome.profit_tuned = profit(costs, x_tuned, outcome.demand);
        outcome.params = params;

        const double ppl_star_v = ppl(costs, x_star, outcome.demand);
        const double ppl_tuned_v = ppl(costs, x_tuned, outcome.demand);
        if (ppl_star_v == 0.0) {
            ++out_excluded;
        } else {
            outcome.rpi = 1.0 - ppl_tuned_v / ppl_star_v;
            sum_ppl_star += ppl_star_v;
            sum_ppl_tuned += ppl_tuned_v;
            ++out_n;
            out_ratios.push_back(*outcome.rpi);
        }
        if (x_star >= outcome.demand) ++covered_star;
        if (x_tuned >= outcome.demand) ++covered_tuned;

        result.origins.push_back(outcome);
        x_prev = x_tuned;
        d_prev = outcome.demand;
    }

    const auto n_origins = static_cast<double>(result.origins.size());
    result.pre_service = static_cast<double>(covered_star) / n_origins;
    result.tuned_service = static_cast<double>(covered_tuned) / n_origins;
    result.in_rpi_mean = in_rpi_count > 0 ? in_rpi_sum / static_cast<double>(in_rpi_count) : 0.0;
    result.out_rpi.n = out_n;
    result.out_rpi.n_excluded = out_excluded;
    result.out_rpi.mean = out_n > 0 ? 1.0 - sum_ppl_tuned / sum_ppl_star : 0.0;
    if (!out_ratios.empty()) {
        result.out_rpi.min = *std::min_element(out_ratios.begin(), out_ratios.end());
        result.out_rpi.max = *std::max_element(out_ratios.begin(), out_ratios.end());
        result.out_rpi.q1 = sample_quantile(out_ratios, 0.25);
        result.out_rpi.median = sample_quantile(out_ratios, 0.5);
        result.out_rpi.q3 = sample_quantile(out_ratios, 0.75);
    }
    return result;
}

} // namespace

std::vector<ProductRollingResult> run_rolling_origin(const RealDataset& data,
                                                     const RollingConfig& cfg, unsigned threads) {
    cfg.validate();
    std::vector<ProductRollingResult> results(cfg.products.size());
    parallel_for_index(cfg.products.size(), threads, [&](std::size_t i) {
        const ProductSeries& series = data.find(cfg.products[i].product);
        results[i] = evaluate_product(series, cfg.products[i].costs, cfg);
    });
    return results;
}

std::vector<std::string> write_rolling_tables(const std::vector<ProductRollingResult>& results,
                                              const std::string& dir, OutputFormat format) {
    std::vector<std::string> paths;

    Table rolling({"product", "origin", "x_star", "x_tuned", "demand", "profit_star",
                   "profit_tuned", "rpi"});
    for (const auto& pr : results) {
        for (const auto& o : pr.origins) {
            rolling.begin_row()
                .cell(pr.product)
                .cell(o.origin)
                .cell(o.x_star)
                .cell(o.x_tuned)
                .cell(o.demand)
                .cell(o.profit_star)
                .cell(o.profit_tuned)
                .cell(o.rpi.has_value() ? *o.rpi : std::numeric_limits<double>::quiet_NaN());
        }
    }
    paths.push_back(rolling.write(dir, "rolling", format));

    Table service({"product", "target", "pre_tuning", "tuned"});
    for (const auto& pr : results) {
        service.begin_row()
            .cell(pr.product)
            .cell(pr.target_service)
            .cell(pr.pre_service)
            .cell(pr.tuned_service);
    }
    paths.push_back(service.write(dir, "service", format));

    Table summary({"product", "in_sample_rpi", "out_sample_rpi", "min", "q1", "median", "q3",
                   "max", "n_origins", "n_excluded"});
    for (const auto& pr : results) {
        summary.begin_row()
            .cell(pr.product)
            .cell(pr.in_rpi_mean)
            .cell(pr.out_rpi.mean)
            .cell(pr.out_rpi.min)
            .cell(pr.out_rpi.q1)
            .cell(pr.out_rpi.median)
            .cell(pr.out_rpi.q3)
            .cell(pr.out_rpi.max)
            .cell(pr.out_rpi.n + pr.out_rpi.n_excluded)
            .cell(pr.out_rpi.n_excluded);
    }
    paths.push_back(summary.write(dir, "rolling_summary", format));

    return paths;
}

} // namespace nvadjust

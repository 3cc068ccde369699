#include "nvadjust/config.hpp"

#include "nvadjust/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace nvadjust {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

void require_object(const json& j, const std::string& what) {
    if (!j.is_object()) {
        throw ConfigError(what + " must be an object");
    }
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& what) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.contains(key)) {
            throw ConfigError(what + ": unknown key '" + key + "'");
        }
    }
}

double as_number(const json& j, const std::string& what) {
    if (!j.is_number()) {
        throw ConfigError(what + " must be a number");
    }
    return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& what) {
    if (!j.is_number_unsigned()) {
        throw ConfigError(what + " must be a non-negative integer");
    }
    return j.get<std::size_t>();
}

std::string as_string(const json& j, const std::string& what) {
    if (!j.is_string()) {
        throw ConfigError(what + " must be a string");
    }
    return j.get<std::string>();
}

std::vector<double> as_number_list(const json& j, const std::string& what) {
    if (!j.is_array()) {
        throw ConfigError(what + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& item : j) {
        out.push_back(as_number(item, what + " entry"));
    }
    return out;
}

ArmaSpec parse_dgp(const json& j) {
    require_object(j, "dgp");
    reject_unknown_keys(j, {"mean", "ar", "ma", "innovation_family", "innovation_sd"}, "dgp");
    ArmaSpec spec;
    spec.mean = 10000.0;
    spec.ar = {0.5};
    spec.ma = {0.3};
    spec.innovation_sd = 100.0;
    if (j.contains("mean")) spec.mean = as_number(j["mean"], "dgp.mean");
    if (j.contains("ar")) spec.ar = as_number_list(j["ar"], "dgp.ar");
    if (j.contains("ma")) spec.ma = as_number_list(j["ma"], "dgp.ma");
    if (j.contains("innovation_family")) {
        spec.innovation_family = parse_family(as_string(j["innovation_family"],
                                                        "dgp.innovation_family"));
    }
    if (j.contains("innovation_sd")) {
        spec.innovation_sd = as_number(j["innovation_sd"], "dgp.innovation_sd");
    }
    return spec;
}

ForecastModelSpec parse_forecaster(const json& j, const std::string& what) {
    require_object(j, what);
    reject_unknown_keys(j, {"kind", "p", "q", "period"}, what);
    if (!j.contains("kind")) {
        throw ConfigError(what + ": missing 'kind'");
    }
    const std::string kind = as_string(j["kind"], what + ".kind");
    ForecastModelSpec spec;
    if (kind == "arma") {
        spec.kind = ForecastKind::arma;
        spec.p = j.contains("p") ? static_cast<int>(as_count(j["p"], what + ".p")) : 0;
        spec.q = j.contains("q") ? static_cast<int>(as_count(j["q"], what + ".q")) : 0;
    } else if (kind == "mean") {
        spec.kind = ForecastKind::mean;
    } else if (kind == "seasonal_mean" || kind == "seasonal_naive") {
        spec.kind =
            kind == "seasonal_mean" ? ForecastKind::seasonal_mean : ForecastKind::seasonal_naive;
        if (j.contains("period")) {
            spec.period = static_cast<int>(as_count(j["period"], what + ".period"));
        }
    } else if (kind == "ses") {
        spec.kind = ForecastKind::ses;
    } else if (kind == "holt") {
        spec.kind = ForecastKind::holt;
    } else if (kind == "auto_smoothing") {
        spec.kind = ForecastKind::auto_smoothing;
    } else {
        throw ConfigError(what + ": unknown forecaster kind '" + kind + "'");
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(what + ": " + e.what());
    }
    return spec;
}

std::vector<AdjustmentParams> parse_grid(const json& j) {
    std::vector<AdjustmentParams> grid;
    if (j.is_array()) {
        for (const auto& item : j) {
            if (!item.is_array() || item.size() != 2) {
                throw ConfigError("adjustment_grid entries must be [beta, gamma] pairs");
            }
            grid.push_back({as_number(item[0], "adjustment_grid beta"),
                            as_number(item[1], "adjustment_grid gamma")});
        }
    } else if (j.is_object()) {
        reject_unknown_keys(j, {"betas", "gammas"}, "adjustment_grid");
        if (!j.contains("betas") || !j.contains("gammas")) {
            throw ConfigError("adjustment_grid object needs 'betas' and 'gammas'");
        }
        const auto betas = as_number_list(j["betas"], "adjustment_grid.betas");
        const auto gammas = as_number_list(j["gammas"], "adjustment_grid.gammas");
        for (double b : betas) {
            for (double g : gammas) {
                grid.push_back({b, g});
            }
        }
    } else {
        throw ConfigError("adjustment_grid must be a pair list or a {betas, gammas} object");
    }
    return grid;
}

ParamBox parse_box(const json& j) {
    require_object(j, "box");
    reject_unknown_keys(j, {"beta", "gamma"}, "box");
    ParamBox box;
    if (j.contains("beta")) {
        const auto b = as_number_list(j["beta"], "box.beta");
        if (b.size() != 2) throw ConfigError("box.beta must be [lo, hi]");
        box.beta_lo = b[0];
        box.beta_hi = b[1];
    }
    if (j.contains("gamma")) {
        const auto g = as_number_list(j["gamma"], "box.gamma");
        if (g.size() != 2) throw ConfigError("box.gamma must be [lo, hi]");
        box.gamma_lo = g[0];
        box.gamma_hi = g[1];
    }
    try {
        box.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("box: ") + e.what());
    }
    return box;
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& origin) {
    const json j = parse_json(json_text, origin);
    require_object(j, origin);
    reject_unknown_keys(j,
                        {"dgp", "n_series", "length", "tau_values", "fit_model",
                         "adjustment_grid", "windows", "master_seed", "output_dir", "warmup",
                         "snapshot_t", "assumed_family", "box"},
                        origin);

    ExperimentConfig cfg;
    if (j.contains("dgp")) cfg.dgp = parse_dgp(j["dgp"]);
    if (j.contains("n_series")) cfg.n_series = as_count(j["n_series"], "n_series");
    if (j.contains("length")) cfg.length = as_count(j["length"], "length");
    if (j.contains("tau_values")) cfg.tau_values = as_number_list(j["tau_values"], "tau_values");
    if (j.contains("fit_model")) cfg.fit_model = parse_forecaster(j["fit_model"], "fit_model");
    if (j.contains("adjustment_grid")) cfg.adjustment_grid = parse_grid(j["adjustment_grid"]);
    if (j.contains("windows")) {
        if (!j["windows"].is_array()) throw ConfigError("windows must be an array");
        cfg.windows.clear();
        for (const auto& w : j["windows"]) {
            if (!w.is_array() || w.size() != 2) {
                throw ConfigError("windows entries must be [first, last] pairs");
            }
            cfg.windows.push_back(
                {as_count(w[0], "window first"), as_count(w[1], "window last")});
        }
    }
    if (j.contains("master_seed")) {
        if (!j["master_seed"].is_number_unsigned()) {
            throw ConfigError("master_seed must be a non-negative integer");
        }
        cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    }
    if (j.contains("output_dir")) cfg.output_dir = as_string(j["output_dir"], "output_dir");
    if (j.contains("warmup")) cfg.warmup = as_count(j["warmup"], "warmup");
    if (j.contains("snapshot_t")) cfg.snapshot_t = as_count(j["snapshot_t"], "snapshot_t");
    if (j.contains("assumed_family")) {
        cfg.assumed_family = parse_family(as_string(j["assumed_family"], "assumed_family"));
    }
    if (j.contains("box")) cfg.box = parse_box(j["box"]);

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str(), path);
}

RollingConfig parse_rolling_config(const std::string& json_text, const std::string& origin) {
    const json j = parse_json(json_text, origin);
    require_object(j, origin);
    reject_unknown_keys(j,
                        {"products", "forecaster", "train_fraction", "warmup", "tuning",
                         "retune_each_origin", "assumed_family", "box", "tuner_init",
                         "presearch_step", "restarts"},
                        origin);

    RollingConfig cfg;
    if (!j.contains("products")) {
        throw ConfigError(origin + ": missing 'products'");
    }
    if (!j["products"].is_array() || j["products"].empty()) {
        throw ConfigError("products must be a non-empty array");
    }
    for (const auto& p : j["products"]) {
        require_object(p, "products entry");
        reject_unknown_keys(p, {"id", "price", "cost", "holding", "shortage"}, "products entry");
        for (const char* key : {"id", "price", "cost", "holding", "shortage"}) {
            if (!p.contains(key)) {
                throw ConfigError(std::string("products entry: missing '") + key + "'");
            }
        }
        ProductCosts pc;
        pc.product = as_string(p["id"], "products.id");
        pc.costs.price = as_number(p["price"], "products.price");
        pc.costs.cost = as_number(p["cost"], "products.cost");
        pc.costs.holding = as_number(p["holding"], "products.holding");
        pc.costs.shortage = as_number(p["shortage"], "products.shortage");
        try {
            pc.costs.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("products entry '" + pc.product + "': " + e.what());
        }
        cfg.products.push_back(std::move(pc));
    }
    if (j.contains("forecaster")) cfg.forecaster = parse_forecaster(j["forecaster"], "forecaster");
    if (j.contains("train_fraction")) {
        cfg.train_fraction = as_number(j["train_fraction"], "train_fraction");
    }
    if (j.contains("warmup")) cfg.warmup = as_count(j["warmup"], "warmup");
    if (j.contains("tuning")) {
        if (!j["tuning"].is_boolean()) throw ConfigError("tuning must be a boolean");
        cfg.tuning = j["tuning"].get<bool>();
    }
    if (j.contains("retune_each_origin")) {
        if (!j["retune_each_origin"].is_boolean()) {
            throw ConfigError("retune_each_origin must be a boolean");
        }
        cfg.retune_each_origin = j["retune_each_origin"].get<bool>();
    }
    if (j.contains("assumed_family")) {
        cfg.assumed_family = parse_family(as_string(j["assumed_family"], "assumed_family"));
    }
    if (j.contains("box")) cfg.box = parse_box(j["box"]);
    if (j.contains("tuner_init")) {
        const auto init = as_number_list(j["tuner_init"], "tuner_init");
        if (init.size() != 2) throw ConfigError("tuner_init must be [beta, gamma]");
        cfg.tuner_init = {init[0], init[1]};
    }
    if (j.contains("presearch_step")) {
        cfg.presearch_step = as_number(j["presearch_step"], "presearch_step");
    }
    if (j.contains("restarts")) {
        cfg.restarts = static_cast<int>(as_count(j["restarts"], "restarts"));
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

RollingConfig load_rolling_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_rolling_config(buf.str(), path);
}

} // namespace nvadjust

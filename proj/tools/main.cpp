#include "nvadjust/config.hpp"
#include "nvadjust/demand_sim.hpp"
#include "nvadjust/errors.hpp"
#include "nvadjust/experiment.hpp"
#include "nvadjust/rolling.hpp"
#include "nvadjust/table.hpp"
#include "nvadjust/tune.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

using namespace nvadjust;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
    auto* config = cmd->add_option("--config", opts.config_path, "Config file (JSON)");
    if (config_required) config->required();
    cmd->add_option("--seed", opts.seed, "Override the master seed");
    cmd->add_option("--out", opts.out_dir, "Override the output directory");
    cmd->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--format", opts.format, "Output file format")
        ->check(CLI::IsMember({"csv", "json"}));
}

int cmd_simulate(const CommonOpts& opts) {
    ExperimentConfig cfg = load_experiment_config(opts.config_path);
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.out_dir) cfg.output_dir = *opts.out_dir;
    const OutputFormat format = parse_output_format(opts.format);

    const auto batch = simulate_batch(cfg.dgp, cfg.n_series, cfg.length, cfg.master_seed);
    Table table({"series_id", "t", "demand"});
    for (const auto& series : batch) {
        for (std::size_t t = 0; t < series.values.size(); ++t) {
            table.begin_row()
                .cell(static_cast<std::size_t>(series.series_id))
                .cell(t + 1)
                .cell(series.values[t]);
        }
    }
    const std::string path = table.write(cfg.output_dir, "demand", format);
    std::cout << "wrote " << path << " (" << cfg.n_series << " series x " << cfg.length
              << " periods, seed " << cfg.master_seed << ")\n";
    return 0;
}

int cmd_experiment(const CommonOpts& opts) {
    ExperimentConfig cfg = load_experiment_config(opts.config_path);
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.out_dir) cfg.output_dir = *opts.out_dir;
    const OutputFormat format = parse_output_format(opts.format);

    const ExperimentResult result = run_simulation_experiment(cfg, opts.threads);
    const auto paths = write_experiment_tables(result, cfg.output_dir, format);
    for (const auto& p : paths) {
        std::cout << "wrote " << p << "\n";
    }
    std::cout << "series: " << cfg.n_series << " (failed: " << result.failed_series
              << "), forecast fallbacks: " << result.forecast_fallbacks << "\n";
    return 0;
}

int cmd_tune(const CommonOpts& opts, const std::string& data_path,
             const std::string& product_arg) {
    const RollingConfig cfg = load_rolling_config(opts.config_path);
    const RealDataset data = load_demand_csv(data_path);

    std::string product = product_arg;
    if (product.empty()) {
        if (cfg.products.size() != 1) {
            throw ConfigError("--product is required when the config lists several products");
        }
        product = cfg.products.front().product;
    }
    const ProductCosts* costs = nullptr;
    for (const auto& pc : cfg.products) {
        if (pc.product == product) costs = &pc;
    }
    if (!costs) {
        throw ConfigError("config has no cost entry for product '" + product + "'");
    }

    const ProductSeries& series = data.find(product);
    DemandSeries demand;
    demand.values = series.demand;

    TunerConfig tuner;
    tuner.train_end = static_cast<std::size_t>(
        std::floor(cfg.train_fraction * static_cast<double>(series.demand.size())));
    tuner.warmup = cfg.warmup;
    tuner.box = cfg.box;
    tuner.init = cfg.tuner_init;
    tuner.presearch_step = cfg.presearch_step;
    tuner.restarts = cfg.restarts;

    const TuneResult result =
        tune_parameters(demand, cfg.forecaster, costs->costs, tuner, cfg.assumed_family);

    if (opts.format == "json") {
        std::cout << "{\"product\":\"" << product << "\",\"beta\":" << format_double(result.params.beta)
                  << ",\"gamma\":" << format_double(result.params.gamma)
                  << ",\"tuned_profit\":" << format_double(result.tuned_profit)
                  << ",\"baseline_profit\":" << format_double(result.baseline_profit)
                  << ",\"evaluations\":" << result.evaluations
                  << ",\"converged\":" << (result.converged ? "true" : "false") << "}\n";
    } else {
        std::cout << "product=" << product << " beta=" << format_double(result.params.beta)
                  << " gamma=" << format_double(result.params.gamma)
                  << " tuned_profit=" << format_double(result.tuned_profit)
                  << " baseline_profit=" << format_double(result.baseline_profit)
                  << " evaluations=" << result.evaluations
                  << " converged=" << (result.converged ? "true" : "false") << "\n";
    }
    return 0;
}

int cmd_evaluate(const CommonOpts& opts, const std::string& data_path, bool no_tuning) {
    RollingConfig cfg = load_rolling_config(opts.config_path);
    if (no_tuning) cfg.tuning = false;
    const RealDataset data = load_demand_csv(data_path);
    const OutputFormat format = parse_output_format(opts.format);
    const std::string out_dir = opts.out_dir.value_or("out");

    const auto results = run_rolling_origin(data, cfg, opts.threads);
    const auto paths = write_rolling_tables(results, out_dir, format);
    for (const auto& p : paths) {
        std::cout << "wrote " << p << "\n";
    }
    for (const auto& pr : results) {
        std::cout << "product " << pr.product << ": origins=" << pr.origins.size()
                  << " out_rpi=" << format_double(pr.out_rpi.mean)
                  << " service target/pre/tuned=" << format_double(pr.target_service) << "/"
                  << format_double(pr.pre_service) << "/" << format_double(pr.tuned_service)
                  << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Newsvendor order adjustment toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string data_path;
    std::string product;
    bool no_tuning = false;

    auto* simulate = app.add_subcommand("simulate", "Generate demand series batches");
    add_common(simulate, opts, true);

    auto* experiment =
        app.add_subcommand("experiment", "Run a simulation study over an adjustment grid");
    add_common(experiment, opts, true);

    auto* tune = app.add_subcommand("tune", "Tune (beta, gamma) on one product's history");
    add_common(tune, opts, true);
    tune->add_option("--data", data_path, "Demand CSV (product,period,demand)")->required();
    tune->add_option("--product", product, "Product id to tune");

    auto* evaluate = app.add_subcommand("evaluate", "Rolling-origin out-of-sample evaluation");
    add_common(evaluate, opts, true);
    evaluate->add_option("--data", data_path, "Demand CSV (product,period,demand)")->required();
    evaluate->add_flag("--no-tuning", no_tuning, "Evaluate the textbook orders only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(opts);
        if (experiment->parsed()) return cmd_experiment(opts);
        if (tune->parsed()) return cmd_tune(opts, data_path, product);
        if (evaluate->parsed()) return cmd_evaluate(opts, data_path, no_tuning);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

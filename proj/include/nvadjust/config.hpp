#pragma once

#include "nvadjust/experiment.hpp"
#include "nvadjust/rolling.hpp"

#include <string>

namespace nvadjust {

/**
 * Loads an experiment config from a JSON document. Keys mirror the
 * ExperimentConfig fields (dgp, n_series, length, tau_values, fit_model,
 * adjustment_grid, windows, master_seed, output_dir, warmup, snapshot_t,
 * assumed_family, box); every key is optional, unknown keys are hard errors.
 */
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& origin);

/**
 * Loads a rolling-evaluation config: products (required: id + price/cost/
 * holding/shortage), forecaster, train_fraction, warmup, tuning,
 * retune_each_origin, assumed_family, box, tuner_init, presearch_step,
 * restarts. Unknown keys are hard errors.
 */
RollingConfig load_rolling_config(const std::string& path);
RollingConfig parse_rolling_config(const std::string& json_text, const std::string& origin);

} // namespace nvadjust

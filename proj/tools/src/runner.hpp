#pragma once

// Internal plumbing shared by the experiment runners.

#include "plgp/experiments.hpp"
#include "plgp/gp.hpp"

#include <chrono>
#include <string>

namespace plgp::experiments::detail {

using json = nlohmann::json;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Defaults for `name`, merged with the overrides.
json merged_config(const std::string& name, const RunOptions& options);

/// Seeds from the options, else from the config's "seeds" list.
std::vector<std::uint64_t> resolve_seeds(const RunOptions& options, const json& config);

KernelSpec kernel_from_config(const json& config);

/// Optimiser defaults for objective + optimiser, then the config's
/// "adam"/"bfgs" section and the stop rule fields.
TrainConfig train_config(const json& config, Objective objective, Optimiser optimiser,
                         std::uint64_t seed, Eigen::Index size);

/// Trains one cell, evaluating nll_exact at the learnt hyperparameters.
/// Failures are recorded in the cell rather than thrown.
Cell train_cell(const std::string& kernel_label, const KernelSpec& init, const Dataset& data,
                const TrainConfig& config, std::uint64_t seed);

std::string cell_stem(const Cell& cell);

void log(const RunOptions& options, const std::string& line);

std::string utc_timestamp();

/// Writes config, checks, summary, manifest and one JSON + trace CSV per cell.
void write_common_outputs(const RunOptions& options, const ExperimentResult& result,
                          const std::string& started_at);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
std::string num(double v);

}  // namespace plgp::experiments::detail

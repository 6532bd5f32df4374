#pragma once

#include "plgp/gp.hpp"
#include "plgp/infoloss.hpp"
#include "plgp/optim.hpp"
#include "plgp/projections.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>

namespace plgp {

// KernelSpec <-> {"family": "SE", "params": {"variance": 1, ...}, "noise_variance": 0.1}
nlohmann::json to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

nlohmann::json to_json(const TrainResult& result);

/// iter,objective,elapsed_s
void write_trace_csv(std::ostream& out, const TrainResult& result);

/// x_star,mean,var
void write_predictive_csv(std::ostream& out, const Eigen::VectorXd& x_star, const Predictive& pred);

/// Header line "kind,seed,n,k", one metadata line, then k lines each holding
/// one column of Omega at full double precision.
void write_projection_csv(std::ostream& out, const ProjectionMatrix& omega);
ProjectionMatrix read_projection_csv(std::istream& in);

/// One row per eigenvalue index: index,K,<label>... (descending eigenvalues).
void write_spectra_csv(std::ostream& out, const SpectraReport& report);
/// Traces and per-hyperparameter information loss for every projection.
nlohmann::json spectra_summary_json(const SpectraReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace plgp

#pragma once

#include "plgp/gp.hpp"
#include "plgp/projections.hpp"
#include "plgp/vfe.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace plgp {

enum class Objective { ExactML, VFE, PL };
enum class Optimiser { Adam, BFGS };

std::string_view to_string(Objective objective);
std::string_view to_string(Optimiser optimiser);
Objective objective_from_string(std::string_view name);
Optimiser optimiser_from_string(std::string_view name);

struct TrainConfig {
  Objective objective = Objective::ExactML;
  Optimiser optimiser = Optimiser::Adam;
  double learning_rate = 0.1;
  int max_iters = 2000;
  int stop_window = 5;
  double stop_delta = 1e-2;
  std::uint64_t seed = 0;

  // Adam moment decay rates and denominator offset.
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // BFGS halvings of a step that fails to decrease the objective.
  int max_halvings = 10;
  // BFGS steps are scaled down so no parameter moves by more than this
  // (log-hyperparameters, raw inducing locations).
  double max_step = 1.0;

  // VFE payload.
  Eigen::Index num_inducing = 100;
  bool freeze_inducing = false;

  // PL payload.
  ProjectionKind projection = ProjectionKind::Sphere;
  Eigen::Index num_projections = 100;
  double localised_width = 1.0;
  RepulsiveOptions repulsive;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;

  /// Adam, lr 0.1, 2000 iterations.
  static TrainConfig adam_defaults(Objective objective);
  /// BFGS, lr 5e-3, 50 iterations.
  static TrainConfig bfgs_defaults(Objective objective);
};

enum class StopReason { MaxIters, Converged, Aborted };
std::string_view to_string(StopReason reason);

/// f(params, grad) returns the objective value and fills grad.
using ObjectiveFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct OptimResult {
  Eigen::VectorXd params;
  std::vector<double> trace;    ///< objective at each iterate
  std::vector<double> elapsed;  ///< seconds since start at each iterate
  StopReason reason = StopReason::MaxIters;
  double wall_time_s = 0.0;

  double final_objective() const { return trace.back(); }
  int iterations() const { return static_cast<int>(trace.size()); }
};

/// True when each of the last `window` changes |previous - current| is below
/// delta.
bool stop_rule_fires(std::span<const double> trace, int window, double delta);

OptimResult adam_minimise(const ObjectiveFn& f, const Eigen::VectorXd& init,
                          const TrainConfig& config);
OptimResult bfgs_minimise(const ObjectiveFn& f, const Eigen::VectorXd& init,
                          const TrainConfig& config);

struct TrainResult {
  KernelSpec learnt_spec;
  std::optional<InducingSet> learnt_inducing;
  double final_objective = 0.0;
  int iterations = 0;
  double wall_time_s = 0.0;
  std::vector<double> trace;
  std::vector<double> trace_elapsed;
  StopReason reason = StopReason::MaxIters;
};

/// Scale-aware starting point: variance = var(y), lengthscale = range / 10,
/// noise = 0.1 var(y), RQ alpha = 1, LocPer period = range / 5 (its periodic
/// and decay lengthscales follow the lengthscale rule).
KernelSpec default_init(KernelFamily family, const Dataset& data);

/// The projection a PL run uses for this config and data.
ProjectionMatrix make_projection(const TrainConfig& config, const KernelSpec& spec_init,
                                 const Dataset& data);

/// Optimise the configured objective from spec_init. Hyperparameters are
/// optimised in log space; inducing locations (VFE) directly.
TrainResult train(const KernelSpec& spec_init, const Dataset& data, const TrainConfig& config);

}  // namespace plgp

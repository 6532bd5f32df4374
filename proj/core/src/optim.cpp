#include "plgp/optim.hpp"

#include "plgp/error.hpp"
#include "plgp/pl.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace plgp {

std::string_view to_string(Objective objective) {
  switch (objective) {
    case Objective::ExactML: return "ML";
    case Objective::VFE: return "VFE";
    case Objective::PL: return "PL";
  }
  return "?";
}

std::string_view to_string(Optimiser optimiser) {
  return optimiser == Optimiser::Adam ? "Adam" : "BFGS";
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::MaxIters: return "max_iters";
    case StopReason::Converged: return "converged";
    case StopReason::Aborted: return "aborted";
  }
  return "?";
}

Objective objective_from_string(std::string_view name) {
  if (name == "ML" || name == "ExactML") return Objective::ExactML;
  if (name == "VFE") return Objective::VFE;
  if (name == "PL") return Objective::PL;
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

Optimiser optimiser_from_string(std::string_view name) {
  if (name == "Adam") return Optimiser::Adam;
  if (name == "BFGS") return Optimiser::BFGS;
  throw std::invalid_argument("unknown optimiser '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (stop_window < 1) throw std::invalid_argument("stop_window must be >= 1");
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
  if (objective == Objective::VFE && num_inducing < 1) {
    throw std::invalid_argument("VFE needs at least one inducing point");
  }
  if (objective == Objective::PL && projection != ProjectionKind::Identity && num_projections < 1) {
    throw std::invalid_argument("PL needs at least one projection");
  }
}

TrainConfig TrainConfig::adam_defaults(Objective objective) {
  TrainConfig c;
  c.objective = objective;
  c.optimiser = Optimiser::Adam;
  c.learning_rate = 0.1;
  c.max_iters = 2000;
  return c;
}

TrainConfig TrainConfig::bfgs_defaults(Objective objective) {
  TrainConfig c;
  c.objective = objective;
  c.optimiser = Optimiser::BFGS;
  c.learning_rate = 5e-3;
  c.max_iters = 50;
  return c;
}

bool stop_rule_fires(std::span<const double> trace, int window, double delta) {
  const auto w = static_cast<std::size_t>(window);
  if (trace.size() < w + 1) return false;
  for (std::size_t i = trace.size() - w; i < trace.size(); ++i) {
    if (std::abs(trace[i - 1] - trace[i]) >= delta) return false;
  }
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Evaluates f, mapping numerical failures to +inf.
double safe_eval(const ObjectiveFn& f, const Eigen::VectorXd& p, Eigen::VectorXd& g) {
  try {
    const double v = f(p, g);
    if (!std::isfinite(v) || !g.allFinite()) return std::numeric_limits<double>::infinity();
    return v;
  } catch (const NumericalError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

OptimResult adam_minimise(const ObjectiveFn& f, const Eigen::VectorXd& init,
                          const TrainConfig& config) {
  config.validate();
  const auto start = Clock::now();
  OptimResult r;
  r.params = init;
  Eigen::VectorXd g(init.size());
  Eigen::VectorXd m = Eigen::VectorXd::Zero(init.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(init.size());
  Eigen::VectorXd prev = init;
  for (int t = 1;; ++t) {
    const double value = safe_eval(f, r.params, g);
    if (!std::isfinite(value)) {
      if (r.trace.empty()) throw NumericalError("adam: objective not finite at the initial point");
      r.params = prev;
      r.reason = StopReason::Aborted;
      break;
    }
    r.trace.push_back(value);
    r.elapsed.push_back(seconds_since(start));
    if (stop_rule_fires(r.trace, config.stop_window, config.stop_delta)) {
      r.reason = StopReason::Converged;
      break;
    }
    if (t >= config.max_iters) {
      r.reason = StopReason::MaxIters;
      break;
    }
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseAbs2();
    const double c1 = 1.0 - std::pow(config.beta1, t);
    const double c2 = 1.0 - std::pow(config.beta2, t);
    prev = r.params;
    r.params.array() -= config.learning_rate * (m.array() / c1) /
                        ((v.array() / c2).sqrt() + config.epsilon);
  }
  r.wall_time_s = seconds_since(start);
  return r;
}

OptimResult bfgs_minimise(const ObjectiveFn& f, const Eigen::VectorXd& init,
                          const TrainConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const Eigen::Index d = init.size();
  const Eigen::MatrixXd h0 = config.learning_rate * Eigen::MatrixXd::Identity(d, d);
  OptimResult r;
  r.params = init;
  Eigen::VectorXd g(d);
  double value = safe_eval(f, r.params, g);
  if (!std::isfinite(value)) throw NumericalError("bfgs: objective not finite at the initial point");
  Eigen::MatrixXd h = h0;
  Eigen::VectorXd g_trial(d);
  for (int t = 1;; ++t) {
    r.trace.push_back(value);
    r.elapsed.push_back(seconds_since(start));
    if (stop_rule_fires(r.trace, config.stop_window, config.stop_delta)) {
      r.reason = StopReason::Converged;
      break;
    }
    if (t >= config.max_iters) {
      r.reason = StopReason::MaxIters;
      break;
    }
    Eigen::VectorXd direction = -(h * g);
    const double longest = direction.cwiseAbs().maxCoeff();
    if (longest > config.max_step) direction *= config.max_step / longest;
    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= config.max_halvings; ++halving, step *= 0.5) {
      const Eigen::VectorXd trial = r.params + step * direction;
      const double v_trial = safe_eval(f, trial, g_trial);
      if (std::isfinite(v_trial) && v_trial <= value) {
        const Eigen::VectorXd s = trial - r.params;
        const Eigen::VectorXd y = g_trial - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
          const double rho = 1.0 / sy;
          const Eigen::VectorXd hy = h * y;
          // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T
          h += rho * ((1.0 + rho * y.dot(hy)) * (s * s.transpose()) -
                      (hy * s.transpose() + s * hy.transpose()));
        }
        r.params = trial;
        value = v_trial;
        g = g_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) h = h0;
  }
  r.wall_time_s = seconds_since(start);
  return r;
}

KernelSpec default_init(KernelFamily family, const Dataset& data) {
  data.validate();
  const double mean = data.y.mean();
  double var = (data.y.array() - mean).square().sum() / static_cast<double>(data.size());
  if (!(var > 0.0)) var = 1.0;
  double range = data.x.maxCoeff() - data.x.minCoeff();
  if (!(range > 0.0)) range = 1.0;
  const double ell = range / 10.0;
  KernelSpec s;
  s.family = family;
  s.noise_variance = 0.1 * var;
  switch (family) {
    case KernelFamily::SE:
    case KernelFamily::Laplace: s.params = {var, ell}; break;
    case KernelFamily::RQ: s.params = {var, ell, 1.0}; break;
    case KernelFamily::LocPer: s.params = {var, range / 5.0, ell, ell}; break;
    case KernelFamily::White: s.noise_variance = var; break;
  }
  return s;
}

ProjectionMatrix make_projection(const TrainConfig& config, const KernelSpec& spec_init,
                                 const Dataset& data) {
  const Eigen::Index n = data.size();
  const Eigen::Index k = config.num_projections;
  switch (config.projection) {
    case ProjectionKind::Sphere: return sphere(n, k, config.seed);
    case ProjectionKind::Repulsive: return repulsive(n, k, config.seed, config.repulsive);
    case ProjectionKind::Localised: return localised(data.x, k, config.localised_width);
    case ProjectionKind::OneHot: return one_hot(n, k, config.seed);
    case ProjectionKind::Eigen: return eigen(gram(spec_init, data.x, true), k, EigenOrder::Top);
    case ProjectionKind::Identity: return identity_projection(n);
    case ProjectionKind::Custom: break;
  }
  throw std::invalid_argument("make_projection: Custom projections must be built by the caller");
}

TrainResult train(const KernelSpec& spec_init, const Dataset& data, const TrainConfig& config) {
  config.validate();
  spec_init.validate();
  data.validate();
  const KernelFamily family = spec_init.family;
  const auto nh = static_cast<Eigen::Index>(spec_init.num_hyper());

  ObjectiveFn f;
  Eigen::VectorXd init = spec_init.log_packed();
  std::optional<ProjectionMatrix> omega;
  InducingSet inducing;

  switch (config.objective) {
    case Objective::ExactML:
      f = [&](const Eigen::VectorXd& u, Eigen::VectorXd& g) {
        const KernelSpec s = KernelSpec::from_log_packed(family, u);
        const ValueAndGradient vg = nll_exact_with_grad(s, data);
        g = vg.gradient.cwiseProduct(s.packed());
        return vg.value;
      };
      break;
    case Objective::PL:
      omega.emplace(make_projection(config, spec_init, data));
      f = [&](const Eigen::VectorXd& u, Eigen::VectorXd& g) {
        const KernelSpec s = KernelSpec::from_log_packed(family, u);
        const ValueAndGradient vg = nll_pl_with_grad(s, *omega, data);
        g = vg.gradient.cwiseProduct(s.packed());
        return vg.value;
      };
      break;
    case Objective::VFE: {
      inducing = InducingSet::quantiles(data.x, config.num_inducing);
      if (!config.freeze_inducing) {
        init.conservativeResize(nh + inducing.size());
        init.tail(inducing.size()) = inducing.locations;
      }
      f = [&](const Eigen::VectorXd& u, Eigen::VectorXd& g) {
        const KernelSpec s = KernelSpec::from_log_packed(family, u.head(nh));
        const InducingSet z =
            config.freeze_inducing ? inducing : InducingSet{u.tail(u.size() - nh)};
        const VfeGradient vg = neg_elbo_grad(s, z, data);
        g.resize(u.size());
        g.head(nh) = vg.hyper.cwiseProduct(s.packed());
        if (!config.freeze_inducing) g.tail(u.size() - nh) = vg.inducing;
        return vg.value;
      };
      break;
    }
  }

  const OptimResult r = config.optimiser == Optimiser::Adam ? adam_minimise(f, init, config)
                                                            : bfgs_minimise(f, init, config);
  TrainResult out;
  out.learnt_spec = KernelSpec::from_log_packed(family, r.params.head(nh));
  if (config.objective == Objective::VFE) {
    out.learnt_inducing =
        config.freeze_inducing ? inducing : InducingSet{r.params.tail(r.params.size() - nh)};
  }
  out.final_objective = r.final_objective();
  out.iterations = r.iterations();
  out.wall_time_s = r.wall_time_s;
  out.trace = r.trace;
  out.trace_elapsed = r.elapsed;
  out.reason = r.reason;
  return out;
}

}  // namespace plgp

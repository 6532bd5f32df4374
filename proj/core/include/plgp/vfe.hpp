#pragma once

#include "plgp/gp.hpp"

namespace plgp {

/// Inducing-point locations for the variational sparse GP.
struct InducingSet {
  Eigen::VectorXd locations;

  Eigen::Index size() const { return locations.size(); }
  void validate() const;

  /// m points at the equispaced quantiles of x (x need not be sorted).
  static InducingSet quantiles(const Eigen::VectorXd& x, Eigen::Index m);
};

struct VfeOptions {
  /// Relative jitter always added to K(xbar, xbar), as a fraction of its
  /// mean diagonal. Its dependence on the hyperparameters is differentiated.
  double inducing_jitter = 1e-8;
};

/// Gradient of the negative ELBO. hyper is in packed (natural) order,
/// inducing is with respect to each inducing location.
struct VfeGradient {
  double value = 0.0;
  Eigen::VectorXd hyper;
  Eigen::VectorXd inducing;
};

/// Negative variational free energy (the negative ELBO), O(n m^2).
double neg_elbo(const KernelSpec& spec, const InducingSet& inducing, const Dataset& data,
                const VfeOptions& options = {});

VfeGradient neg_elbo_grad(const KernelSpec& spec, const InducingSet& inducing,
                          const Dataset& data, const VfeOptions& options = {});

/// Predictive of the optimal variational posterior q(u).
Predictive predict_sparse(const KernelSpec& spec, const InducingSet& inducing,
                          const Dataset& data, const Eigen::VectorXd& x_star,
                          bool full_covariance = false, const VfeOptions& options = {});

}  // namespace plgp

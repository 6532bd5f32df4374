#pragma once

#include "plgp/kernels.hpp"
#include "plgp/linalg.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace plgp {

/// Paired 1-D inputs and outputs.
struct Dataset {
  Eigen::VectorXd x;
  Eigen::VectorXd y;

  Eigen::Index size() const { return x.size(); }
  /// Throws std::invalid_argument on empty, mismatched or non-finite data.
  void validate() const;
};

/// Predictive posterior. When only the diagonal was requested, covariance is
/// empty and variance holds the marginal variances.
struct Predictive {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  Eigen::MatrixXd covariance;

  bool has_full_covariance() const { return covariance.size() > 0; }
};

/// Objective value with its gradient in packed (natural) hyperparameter order.
struct ValueAndGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// Negative log density of y under N(0, cov), through a Cholesky factor.
double gaussian_nll(const Eigen::MatrixXd& cov, const Eigen::VectorXd& y);

double nll_exact(const KernelSpec& spec, const Dataset& data);
Eigen::VectorXd nll_exact_grad(const KernelSpec& spec, const Dataset& data);
ValueAndGradient nll_exact_with_grad(const KernelSpec& spec, const Dataset& data);

Predictive predict(const KernelSpec& spec, const Dataset& data, const Eigen::VectorXd& x_star,
                   bool full_covariance = false);

/// One draw of y ~ N(0, K + noise I) using a seeded standard-normal stream.
Eigen::VectorXd sample_prior(const KernelSpec& spec, const Eigen::VectorXd& x,
                             std::uint64_t seed);

}  // namespace plgp

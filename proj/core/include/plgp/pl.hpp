#pragma once

#include "plgp/gp.hpp"
#include "plgp/projections.hpp"

namespace plgp {

/// z = Omega^T y together with the projection that produced it.
struct ProjectedData {
  Eigen::VectorXd z;
  ProjectionMatrix omega;
};

ProjectedData project(const ProjectionMatrix& omega, const Eigen::VectorXd& y);

/// Negative log density of z = Omega^T y under N(0, Omega^T cov Omega).
double projected_nll(const Eigen::MatrixXd& cov, const ProjectionMatrix& omega,
                     const Eigen::VectorXd& y);

/// Projected likelihood objective.
///
/// With C = Omega^T (K + noise I) Omega and z = Omega^T y:
///   L_PL = 1/2 z^T C^-1 z + 1/2 log|C| + k/2 log(2 pi).
/// Cost is dominated by forming (K + noise I) Omega, O(k n^2).
double nll_pl(const KernelSpec& spec, const ProjectionMatrix& omega, const Dataset& data);

Eigen::VectorXd nll_pl_grad(const KernelSpec& spec, const ProjectionMatrix& omega,
                            const Dataset& data);

/// Value and gradient in one pass. The hyperparameter gradient is
///   1/2 sum_ij (Omega W Omega^T)_ij dK_ij,  W = C^-1 - C^-1 z z^T C^-1,
/// so each hyperparameter costs O(n^2) after a single O(k n^2) product.
ValueAndGradient nll_pl_with_grad(const KernelSpec& spec, const ProjectionMatrix& omega,
                                  const Dataset& data);

}  // namespace plgp

#pragma once

#include "plgp/kernels.hpp"
#include "plgp/projections.hpp"

#include <string>
#include <vector>

namespace plgp {

// Fisher-information loss of learning hyperparameters from Z = Omega^T Y
// instead of Y ~ N(0, K). Throughout, K is the covariance including the noise
// term, and every function takes it explicitly as a noisy GramMatrix.

/// Moments of Y | Z: mean = mu_coeff * z and covariance sigma, where
///   mu_coeff = K Omega (Omega^T K Omega)^-1
///   sigma    = K - K Omega (Omega^T K Omega)^-1 Omega^T K
struct ConditionalMoments {
  Eigen::MatrixXd mu_coeff;
  Eigen::MatrixXd sigma;
};

ConditionalMoments conditional_moments(const GramMatrix& gram_with_noise,
                                       const ProjectionMatrix& omega);

/// Fisher information of the full data for one hyperparameter:
/// I_Y = 1/2 tr((K^-1 dK)^2).
double fisher_full(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& dcov);

/// Fisher information of the projected data:
/// I_Z = 1/2 tr(((W^T K W)^-1 W^T dK W)^2).
double fisher_projected(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& dcov,
                        const ProjectionMatrix& omega);

/// Expected conditional variance of the score,
///   dI = tr(1/2 (Kb S)^2 + Kb S Kb M),  Kb = K^-1 dK K^-1,
/// with S = Cov(Y|Z) and M = E[mu mu^T] = K W (W^T K W)^-1 W^T K.
double delta_information(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& dcov,
                         const ProjectionMatrix& omega);

/// Same, with the covariance and its derivative built from a kernel spec.
/// param_index is in packed order (the noise variance is the last index).
double delta_information(const KernelSpec& spec, const Eigen::VectorXd& x,
                         const ProjectionMatrix& omega, std::size_t param_index);

struct HyperInfo {
  std::string name;
  double fisher_full = 0.0;
  double fisher_proj = 0.0;
  double delta_i = 0.0;
};

/// Per-projection diagnostics.
struct InfoLossReport {
  std::string label;
  ProjectionKind kind = ProjectionKind::Custom;
  Eigen::Index k = 0;
  std::vector<HyperInfo> hyper;
  Eigen::VectorXd sigma_spectrum;  ///< eigenvalues of Cov(Y|Z), descending
  double sigma_trace = 0.0;
};

struct SpectraReport {
  Eigen::VectorXd gram_spectrum;  ///< eigenvalues of K, descending
  double gram_trace = 0.0;
  std::vector<InfoLossReport> projections;
};

/// Spectra of K and Cov(Y|Z), traces and per-hyperparameter information
/// loss for every projection. Labels default to the projection kind.
SpectraReport spectra_report(const KernelSpec& spec, const Eigen::VectorXd& x,
                             const std::vector<ProjectionMatrix>& omegas,
                             const std::vector<std::string>& labels = {});

/// Descending eigenvalues of a symmetric matrix.
Eigen::VectorXd descending_eigenvalues(const Eigen::MatrixXd& symmetric);

/// Bounds on tr Cov(Y|Z) over all rank-k projections: the sums of the n-k
/// smallest and n-k largest eigenvalues of K.
struct TraceBounds {
  double lower = 0.0;
  double upper = 0.0;
};
TraceBounds trace_bounds(const Eigen::VectorXd& spectrum, Eigen::Index k);

}  // namespace plgp

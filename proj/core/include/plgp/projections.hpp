#pragma once

#include "plgp/kernels.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>

namespace plgp {

enum class ProjectionKind { Sphere, Repulsive, Localised, OneHot, Eigen, Identity, Custom };

std::string_view to_string(ProjectionKind kind);
ProjectionKind projection_kind_from_string(std::string_view name);

/// n x k matrix of unit-norm, linearly independent columns.
///
/// The invariants are checked on construction: every column norm is 1 within
/// 1e-12 and every singular value exceeds 1e-10 times the largest.
class ProjectionMatrix {
 public:
  ProjectionMatrix(Eigen::MatrixXd omega, ProjectionKind kind, std::uint64_t seed = 0);

  const Eigen::MatrixXd& omega() const { return omega_; }
  ProjectionKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  Eigen::Index n() const { return omega_.rows(); }
  Eigen::Index k() const { return omega_.cols(); }

  /// Same columns in a different order.
  ProjectionMatrix permuted(const std::vector<Eigen::Index>& order) const;

 private:
  Eigen::MatrixXd omega_;
  ProjectionKind kind_;
  std::uint64_t seed_;
};

/// Frame potential sum_{i<j} (w_i^T w_j)^2.
double frame_potential(const Eigen::MatrixXd& omega);

/// Columns i.i.d. uniform on the unit sphere.
ProjectionMatrix sphere(Eigen::Index n, Eigen::Index k, std::uint64_t seed);

struct RepulsiveOptions {
  int steps = 200;
  double step_size = 0.1;
};

/// Sphere draw followed by Riemannian gradient descent on the frame
/// potential. A step that would raise the potential is halved until it does
/// not; the optional history receives the potential after every step
/// (history[0] is the starting value).
ProjectionMatrix repulsive(Eigen::Index n, Eigen::Index k, std::uint64_t seed,
                           const RepulsiveOptions& options = {},
                           std::vector<double>* history = nullptr);

/// Unit-normalised Gaussian bumps with equispaced centres over [min x, max x]
/// and width width_factor times the centre spacing.
ProjectionMatrix localised(const Eigen::VectorXd& x, Eigen::Index k, double width_factor = 1.0);

/// k distinct standard basis vectors, indices drawn without replacement.
ProjectionMatrix one_hot(Eigen::Index n, Eigen::Index k, std::uint64_t seed);

enum class EigenOrder { Top, Bottom };

/// k eigenvectors of a symmetric Gram matrix, by descending (Top) or
/// ascending (Bottom) eigenvalue.
ProjectionMatrix eigen(const GramMatrix& gram, Eigen::Index k, EigenOrder which);

ProjectionMatrix identity_projection(Eigen::Index n);

}  // namespace plgp

#pragma once

#include <Eigen/Dense>

namespace plgp {

/// Jitter escalation policy: on a failed factorization, add
/// initial_relative * mean(diag) to the diagonal and retry, multiplying by
/// growth until max_relative is exceeded.
struct JitterPolicy {
  double initial_relative = 1e-8;
  double max_relative = 1e-2;
  double growth = 10.0;
};

struct Cholesky {
  Eigen::LLT<Eigen::MatrixXd> llt;
  /// Absolute jitter that was added to the diagonal (0 if none).
  double jitter = 0.0;

  double log_det() const;
  template <typename Rhs>
  typename Rhs::PlainObject solve(const Eigen::MatrixBase<Rhs>& rhs) const {
    return llt.solve(rhs);
  }
  Eigen::MatrixXd inverse() const;
  Eigen::Index size() const { return llt.matrixLLT().rows(); }
};

/// Cholesky factorization with jitter escalation. Throws NumericalError when
/// the matrix does not factorize even at the largest jitter, or is non-finite.
Cholesky robust_cholesky(const Eigen::MatrixXd& a, const JitterPolicy& policy = {});

/// Cholesky with a fixed relative jitter always added, then the escalation
/// policy on failure. Used for inducing-point Gram matrices.
Cholesky jittered_cholesky(const Eigen::MatrixXd& a, double base_relative,
                           const JitterPolicy& policy = {});

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

}  // namespace plgp

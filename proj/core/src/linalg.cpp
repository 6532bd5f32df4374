#include "plgp/linalg.hpp"

#include "plgp/error.hpp"

#include <cmath>

namespace plgp {

double Cholesky::log_det() const {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Eigen::MatrixXd Cholesky::inverse() const {
  return llt.solve(Eigen::MatrixXd::Identity(size(), size()));
}

namespace {

bool try_factor(const Eigen::MatrixXd& a, Cholesky& out) {
  out.llt.compute(a);
  if (out.llt.info() != Eigen::Success) return false;
  // LLT reports success on some non-finite inputs.
  return out.llt.matrixLLT().diagonal().allFinite() &&
         (out.llt.matrixLLT().diagonal().array() > 0.0).all();
}

}  // namespace

Cholesky robust_cholesky(const Eigen::MatrixXd& a, const JitterPolicy& policy) {
  return jittered_cholesky(a, 0.0, policy);
}

Cholesky jittered_cholesky(const Eigen::MatrixXd& a, double base_relative,
                           const JitterPolicy& policy) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw NumericalError("cholesky: expected a non-empty square matrix");
  }
  if (!a.allFinite()) throw NumericalError("cholesky: non-finite matrix entries");
  const double scale = std::abs(a.diagonal().mean());
  Cholesky out;
  Eigen::MatrixXd work = a;
  double jitter = base_relative * scale;
  if (jitter > 0.0) work.diagonal().array() += jitter;
  if (try_factor(work, out)) {
    out.jitter = jitter;
    return out;
  }
  for (double rel = policy.initial_relative; rel <= policy.max_relative * (1.0 + 1e-12);
       rel *= policy.growth) {
    const double extra = rel * scale;
    work = a;
    work.diagonal().array() += jitter + extra;
    if (try_factor(work, out)) {
      out.jitter = jitter + extra;
      return out;
    }
  }
  throw NumericalError("cholesky: matrix not positive definite after jitter escalation");
}

}  // namespace plgp

#include "plgp/pl.hpp"

#include <stdexcept>

namespace plgp {

namespace {

void check_length(const ProjectionMatrix& omega, Eigen::Index n) {
  if (omega.n() != n) {
    throw std::invalid_argument("projection has " + std::to_string(omega.n()) +
                                " rows but data has length " + std::to_string(n));
  }
}

struct ProjectedFactor {
  Cholesky chol;
  Eigen::VectorXd z;
  double value = 0.0;
};

ProjectedFactor factor_projected(const Eigen::MatrixXd& cov, const ProjectionMatrix& omega,
                                 const Eigen::VectorXd& y) {
  check_length(omega, y.size());
  const Eigen::MatrixXd& w = omega.omega();
  const Eigen::MatrixXd cov_w = cov * w;
  Eigen::MatrixXd c = w.transpose() * cov_w;
  c = 0.5 * (c + c.transpose()).eval();
  ProjectedFactor f{robust_cholesky(c), w.transpose() * y, 0.0};
  const Eigen::VectorXd half = f.chol.llt.matrixL().solve(f.z);
  f.value = 0.5 * half.squaredNorm() + 0.5 * f.chol.log_det() +
            0.5 * static_cast<double>(omega.k()) * kLog2Pi;
  return f;
}

}  // namespace

ProjectedData project(const ProjectionMatrix& omega, const Eigen::VectorXd& y) {
  check_length(omega, y.size());
  return {omega.omega().transpose() * y, omega};
}

double projected_nll(const Eigen::MatrixXd& cov, const ProjectionMatrix& omega,
                     const Eigen::VectorXd& y) {
  return factor_projected(cov, omega, y).value;
}

double nll_pl(const KernelSpec& spec, const ProjectionMatrix& omega, const Dataset& data) {
  data.validate();
  return projected_nll(gram(spec, data.x, true).values, omega, data.y);
}

ValueAndGradient nll_pl_with_grad(const KernelSpec& spec, const ProjectionMatrix& omega,
                                  const Dataset& data) {
  data.validate();
  const ProjectedFactor f = factor_projected(gram(spec, data.x, true).values, omega, data.y);
  const Eigen::VectorXd beta = f.chol.solve(f.z);
  Eigen::MatrixXd w = f.chol.inverse();
  w.noalias() -= beta * beta.transpose();
  const Eigen::MatrixXd& om = omega.omega();
  const Eigen::MatrixXd lifted = om * (w * om.transpose());
  return {f.value, 0.5 * contract_gram_grad(spec, data.x, lifted)};
}

Eigen::VectorXd nll_pl_grad(const KernelSpec& spec, const ProjectionMatrix& omega,
                            const Dataset& data) {
  return nll_pl_with_grad(spec, omega, data).gradient;
}

}  // namespace plgp

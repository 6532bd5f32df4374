#include "plgp/gp.hpp"
#include "plgp/random.hpp"

#include "plgp/error.hpp"

#include <random>
#include <stdexcept>

namespace plgp {

void Dataset::validate() const {
  if (x.size() == 0) throw std::invalid_argument("dataset is empty");
  if (x.size() != y.size()) throw std::invalid_argument("dataset x/y length mismatch");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("dataset has non-finite values");
}

double gaussian_nll(const Eigen::MatrixXd& cov, const Eigen::VectorXd& y) {
  const Cholesky chol = robust_cholesky(cov);
  const Eigen::VectorXd half = chol.llt.matrixL().solve(y);
  return 0.5 * half.squaredNorm() + 0.5 * chol.log_det() +
         0.5 * static_cast<double>(y.size()) * kLog2Pi;
}

double nll_exact(const KernelSpec& spec, const Dataset& data) {
  data.validate();
  return gaussian_nll(gram(spec, data.x, true).values, data.y);
}

ValueAndGradient nll_exact_with_grad(const KernelSpec& spec, const Dataset& data) {
  data.validate();
  const Cholesky chol = robust_cholesky(gram(spec, data.x, true).values);
  const Eigen::VectorXd alpha = chol.solve(data.y);
  ValueAndGradient out;
  out.value = 0.5 * data.y.dot(alpha) + 0.5 * chol.log_det() +
              0.5 * static_cast<double>(data.size()) * kLog2Pi;
  // dL/dtheta = 1/2 tr((K^-1 - alpha alpha^T) dK)
  Eigen::MatrixXd w = chol.inverse();
  w.noalias() -= alpha * alpha.transpose();
  out.gradient = 0.5 * contract_gram_grad(spec, data.x, w);
  return out;
}

Eigen::VectorXd nll_exact_grad(const KernelSpec& spec, const Dataset& data) {
  return nll_exact_with_grad(spec, data).gradient;
}

Predictive predict(const KernelSpec& spec, const Dataset& data, const Eigen::VectorXd& x_star,
                   bool full_covariance) {
  data.validate();
  const Cholesky chol = robust_cholesky(gram(spec, data.x, true).values);
  const Eigen::MatrixXd k_sx = cross_gram(spec, x_star, data.x);
  Predictive p;
  p.mean = k_sx * chol.solve(data.y);
  const Eigen::MatrixXd v = chol.llt.matrixL().solve(k_sx.transpose());
  const double prior = Kernel(spec).variance();
  if (full_covariance) {
    p.covariance = cross_gram(spec, x_star, x_star);
    p.covariance.noalias() -= v.transpose() * v;
    p.covariance = 0.5 * (p.covariance + p.covariance.transpose()).eval();
    p.variance = p.covariance.diagonal();
  } else {
    p.variance = (prior - v.colwise().squaredNorm().array()).matrix().transpose();
  }
  p.variance = p.variance.cwiseMax(0.0);
  if (full_covariance) p.covariance.diagonal() = p.variance;
  return p;
}

Eigen::VectorXd sample_prior(const KernelSpec& spec, const Eigen::VectorXd& x,
                             std::uint64_t seed) {
  const Cholesky chol = robust_cholesky(gram(spec, x, true).values);
  std::mt19937_64 rng = make_rng(seed, RandomStream::Prior);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd xi(x.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) xi[i] = normal(rng);
  return chol.llt.matrixL() * xi;
}

}  // namespace plgp

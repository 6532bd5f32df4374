#include "plgp/vfe.hpp"

#include "plgp/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace plgp {

void InducingSet::validate() const {
  if (locations.size() == 0) throw std::invalid_argument("inducing set is empty");
  if (!locations.allFinite()) throw std::invalid_argument("inducing set has non-finite entries");
}

InducingSet InducingSet::quantiles(const Eigen::VectorXd& x, Eigen::Index m) {
  if (m < 1 || x.size() == 0) throw std::invalid_argument("quantiles: need m >= 1 and data");
  std::vector<double> sorted(x.data(), x.data() + x.size());
  std::sort(sorted.begin(), sorted.end());
  InducingSet out{Eigen::VectorXd(m)};
  const double last = static_cast<double>(sorted.size() - 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double pos = m == 1 ? 0.5 * last : last * static_cast<double>(i) / static_cast<double>(m - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double t = pos - static_cast<double>(lo);
    out.locations[i] = (1.0 - t) * sorted[lo] + t * sorted[hi];
  }
  return out;
}

namespace {

// Shared factorizations of the collapsed bound:
//   A = L_uu^-1 K_uf / sigma,  B = I + A A^T,  c = L_B^-1 A y / sigma.
struct Collapsed {
  Eigen::MatrixXd kuf;
  Cholesky luu;
  double jitter_ratio = 0.0;  // jitter / mean(diag K_uu)
  Eigen::MatrixXd a;
  Cholesky lb;
  Eigen::VectorXd c;
  double sigma = 0.0;
  double value = 0.0;
};

Collapsed collapse(const KernelSpec& spec, const InducingSet& inducing, const Dataset& data,
                   const VfeOptions& options) {
  data.validate();
  inducing.validate();
  spec.validate();
  Collapsed s;
  const Eigen::MatrixXd kuu = cross_gram(spec, inducing.locations, inducing.locations);
  s.luu = jittered_cholesky(kuu, options.inducing_jitter);
  const double scale = std::abs(kuu.diagonal().mean());
  s.jitter_ratio = scale > 0.0 ? s.luu.jitter / scale : 0.0;

  s.kuf = cross_gram(spec, inducing.locations, data.x);
  s.sigma = std::sqrt(spec.noise_variance);
  s.a = s.luu.llt.matrixL().solve(s.kuf) / s.sigma;

  const Eigen::Index m = inducing.size();
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(m, m);
  b.selfadjointView<Eigen::Lower>().rankUpdate(s.a);
  b.triangularView<Eigen::StrictlyUpper>() = b.transpose();
  s.lb = robust_cholesky(b);
  s.c = s.lb.llt.matrixL().solve(s.a * data.y) / s.sigma;

  const double n = static_cast<double>(data.size());
  const double noise = spec.noise_variance;
  const double kdiag = Kernel(spec).variance();
  s.value = 0.5 * n * kLog2Pi + 0.5 * s.lb.log_det() + 0.5 * n * std::log(noise) +
            0.5 * data.y.squaredNorm() / noise - 0.5 * s.c.squaredNorm() +
            0.5 * n * kdiag / noise - 0.5 * s.a.squaredNorm();
  return s;
}

}  // namespace

double neg_elbo(const KernelSpec& spec, const InducingSet& inducing, const Dataset& data,
                const VfeOptions& options) {
  return collapse(spec, inducing, data, options).value;
}

VfeGradient neg_elbo_grad(const KernelSpec& spec, const InducingSet& inducing,
                          const Dataset& data, const VfeOptions& options) {
  const Collapsed s = collapse(spec, inducing, data, options);
  const Eigen::Index m = inducing.size();
  const Eigen::Index n = data.size();
  const double noise = spec.noise_variance;
  const double sigma = s.sigma;
  const auto luu_t = s.luu.llt.matrixU();

  // alpha = Sigma^-1 y with Sigma = Q + noise I, via Woodbury.
  const Eigen::VectorXd binv_ay = s.lb.llt.matrixU().solve(s.c) * sigma;
  const Eigen::VectorXd alpha = (data.y - s.a.transpose() * binv_ay) / noise;

  // P = K_uu^-1 K_uf and P Sigma^-1 = L_uu^-T B^-1 A / sigma.
  const Eigen::MatrixXd p = luu_t.solve(s.a) * sigma;
  const Eigen::MatrixXd p_sigma_inv = luu_t.solve(s.lb.solve(s.a)) / sigma;
  const Eigen::VectorXd p_alpha = p * alpha;

  // G = dF/dQ; PG is all that is needed.
  Eigen::MatrixXd pg = 0.5 * p_sigma_inv;
  pg.noalias() -= 0.5 * p_alpha * alpha.transpose();
  pg -= (0.5 / noise) * p;

  const Eigen::MatrixXd d_kuf = 2.0 * pg;
  Eigen::MatrixXd d_kuu = -(pg * p.transpose());
  d_kuu = 0.5 * (d_kuu + d_kuu.transpose()).eval();

  const Kernel kernel(spec);
  const std::size_t q = kernel.arity();
  std::vector<double> buf(q);
  VfeGradient out;
  out.value = s.value;
  out.hyper = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q) + 1);
  out.inducing = Eigen::VectorXd::Zero(m);
  const auto& z = inducing.locations;

  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double lag = z[i] - z[j];
      kernel.param_gradient(lag, buf);
      for (std::size_t r = 0; r < q; ++r) out.hyper[r] += d_kuu(i, j) * buf[r];
      if (i != j) out.inducing[i] += 2.0 * d_kuu(i, j) * kernel.lag_derivative(lag);
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double lag = z[i] - data.x[j];
      kernel.param_gradient(lag, buf);
      for (std::size_t r = 0; r < q; ++r) out.hyper[r] += d_kuf(i, j) * buf[r];
      out.inducing[i] += d_kuf(i, j) * kernel.lag_derivative(lag);
    }
  }
  // Diagonal of K_ff in the trace term, and the jitter proportional to mean diag K_uu.
  kernel.param_gradient(0.0, buf);
  const double d_jitter = s.jitter_ratio * d_kuu.trace();
  for (std::size_t r = 0; r < q; ++r) {
    out.hyper[r] += (0.5 * static_cast<double>(n) / noise + d_jitter) * buf[r];
  }

  const double tr_binv = s.lb.inverse().trace();
  const double tr_sigma_inv = (static_cast<double>(n - m) + tr_binv) / noise;
  const double tr_residual = static_cast<double>(n) * kernel.variance() - noise * s.a.squaredNorm();
  out.hyper[static_cast<Eigen::Index>(q)] =
      -0.5 * alpha.squaredNorm() + 0.5 * tr_sigma_inv - 0.5 * tr_residual / (noise * noise);
  return out;
}

Predictive predict_sparse(const KernelSpec& spec, const InducingSet& inducing,
                          const Dataset& data, const Eigen::VectorXd& x_star,
                          bool full_covariance, const VfeOptions& options) {
  const Collapsed s = collapse(spec, inducing, data, options);
  const Eigen::MatrixXd kus = cross_gram(spec, inducing.locations, x_star);
  const Eigen::MatrixXd tmp1 = s.luu.llt.matrixL().solve(kus);
  const Eigen::MatrixXd tmp2 = s.lb.llt.matrixL().solve(tmp1);
  Predictive p;
  p.mean = tmp2.transpose() * s.c;
  if (full_covariance) {
    p.covariance = cross_gram(spec, x_star, x_star);
    p.covariance.noalias() += tmp2.transpose() * tmp2;
    p.covariance.noalias() -= tmp1.transpose() * tmp1;
    p.covariance = 0.5 * (p.covariance + p.covariance.transpose()).eval();
    p.variance = p.covariance.diagonal().cwiseMax(0.0);
    p.covariance.diagonal() = p.variance;
  } else {
    const double prior = Kernel(spec).variance();
    p.variance = (prior + tmp2.colwise().squaredNorm().array() - tmp1.colwise().squaredNorm().array())
                     .matrix()
                     .transpose()
                     .cwiseMax(0.0);
  }
  return p;
}

}  // namespace plgp

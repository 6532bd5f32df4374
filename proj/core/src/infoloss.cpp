#include "plgp/infoloss.hpp"

#include "plgp/error.hpp"
#include "plgp/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace plgp {

namespace {

struct ProjectedCov {
  Eigen::MatrixXd cov_w;  // K Omega
  Cholesky chol;          // Omega^T K Omega
};

ProjectedCov project_cov(const Eigen::MatrixXd& cov, const ProjectionMatrix& omega) {
  if (omega.n() != cov.rows()) throw std::invalid_argument("projection/gram size mismatch");
  ProjectedCov p;
  p.cov_w = cov * omega.omega();
  Eigen::MatrixXd c = omega.omega().transpose() * p.cov_w;
  c = 0.5 * (c + c.transpose()).eval();
  p.chol.llt.compute(c);
  if (p.chol.llt.info() != Eigen::Success) {
    throw NumericalError("projected gram Omega^T K Omega is not positive definite");
  }
  return p;
}

}  // namespace

ConditionalMoments conditional_moments(const GramMatrix& gram_with_noise,
                                       const ProjectionMatrix& omega) {
  const Eigen::MatrixXd& cov = gram_with_noise.values;
  const ProjectedCov p = project_cov(cov, omega);
  ConditionalMoments m;
  m.mu_coeff = p.chol.solve(p.cov_w.transpose()).transpose();
  m.sigma = cov - m.mu_coeff * p.cov_w.transpose();
  m.sigma = 0.5 * (m.sigma + m.sigma.transpose()).eval();
  return m;
}

double fisher_full(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& dcov) {
  const Cholesky chol = robust_cholesky(cov);
  const Eigen::MatrixXd a = chol.solve(dcov);
  return 0.5 * (a.array() * a.transpose().array()).sum();
}

double fisher_projected(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& dcov,
                        const ProjectionMatrix& omega) {
  const ProjectedCov p = project_cov(cov, omega);
  const Eigen::MatrixXd& w = omega.omega();
  const Eigen::MatrixXd dc = w.transpose() * dcov * w;
  const Eigen::MatrixXd a = p.chol.solve(dc);
  return 0.5 * (a.array() * a.transpose().array()).sum();
}

double delta_information(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& dcov,
                         const ProjectionMatrix& omega) {
  const ConditionalMoments m = conditional_moments({cov, true}, omega);
  const Cholesky chol = robust_cholesky(cov);
  // Kb = K^-1 dK K^-1
  Eigen::MatrixXd kbar = chol.solve(chol.solve(dcov).transpose());
  kbar = 0.5 * (kbar + kbar.transpose()).eval();
  const Eigen::MatrixXd ks = kbar * m.sigma;
  const Eigen::MatrixXd mean_outer = cov - m.sigma;  // K W (W^T K W)^-1 W^T K
  const double quad = 0.5 * (ks.array() * ks.transpose().array()).sum();
  const double mean_term = (ks * kbar).cwiseProduct(mean_outer.transpose()).sum();
  return quad + mean_term;
}

double delta_information(const KernelSpec& spec, const Eigen::VectorXd& x,
                         const ProjectionMatrix& omega, std::size_t param_index) {
  return delta_information(gram(spec, x, true).values, gram_grad(spec, x, param_index), omega);
}

Eigen::VectorXd descending_eigenvalues(const Eigen::MatrixXd& symmetric) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  return es.eigenvalues().reverse();
}

TraceBounds trace_bounds(const Eigen::VectorXd& spectrum, Eigen::Index k) {
  const Eigen::Index n = spectrum.size();
  if (k < 0 || k > n) throw std::invalid_argument("trace_bounds: k out of range");
  std::vector<double> v(spectrum.data(), spectrum.data() + n);
  std::sort(v.begin(), v.end());
  TraceBounds b;
  const auto rest = static_cast<std::size_t>(n - k);
  for (std::size_t i = 0; i < rest; ++i) {
    b.lower += v[i];
    b.upper += v[v.size() - 1 - i];
  }
  return b;
}

SpectraReport spectra_report(const KernelSpec& spec, const Eigen::VectorXd& x,
                             const std::vector<ProjectionMatrix>& omegas,
                             const std::vector<std::string>& labels) {
  if (!labels.empty() && labels.size() != omegas.size()) {
    throw std::invalid_argument("spectra_report: labels must match projections");
  }
  const GramMatrix g = gram(spec, x, true);
  std::vector<Eigen::MatrixXd> dcov;
  for (std::size_t j = 0; j < spec.num_hyper(); ++j) dcov.push_back(gram_grad(spec, x, j));
  std::vector<std::string> names = param_names(spec.family);
  names.emplace_back("noise_variance");

  SpectraReport report;
  report.gram_spectrum = descending_eigenvalues(g.values);
  report.gram_trace = g.values.trace();
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const auto& om = omegas[i];
    InfoLossReport r;
    r.label = labels.empty() ? std::string(to_string(om.kind())) : labels[i];
    r.kind = om.kind();
    r.k = om.k();
    const ConditionalMoments m = conditional_moments(g, om);
    r.sigma_spectrum = descending_eigenvalues(m.sigma);
    r.sigma_trace = m.sigma.trace();
    for (std::size_t j = 0; j < dcov.size(); ++j) {
      HyperInfo h;
      h.name = names[j];
      h.fisher_full = fisher_full(g.values, dcov[j]);
      h.fisher_proj = fisher_projected(g.values, dcov[j], om);
      h.delta_i = delta_information(g.values, dcov[j], om);
      r.hyper.push_back(std::move(h));
    }
    report.projections.push_back(std::move(r));
  }
  return report;
}

}  // namespace plgp

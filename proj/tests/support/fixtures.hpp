#pragma once

#include "plgp/gp.hpp"
#include "plgp/kernels.hpp"

#include <random>

namespace plgp::testing {

/// Hyperparameters drawn on scales that keep lags of a few units informative.
inline KernelSpec random_spec(KernelFamily family, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.3, 3.0);
  switch (family) {
    case KernelFamily::SE: return KernelSpec::se(u(rng), u(rng), 0.1 * u(rng));
    case KernelFamily::Laplace: return KernelSpec::laplace(u(rng), u(rng), 0.1 * u(rng));
    case KernelFamily::RQ: return KernelSpec::rq(u(rng), u(rng), u(rng), 0.1 * u(rng));
    case KernelFamily::LocPer:
      return KernelSpec::locper(u(rng), 1.0 + u(rng), u(rng), 2.0 * u(rng), 0.1 * u(rng));
    case KernelFamily::White: return KernelSpec::white(u(rng));
  }
  return {};
}

inline Eigen::VectorXd random_inputs(Eigen::Index n, std::mt19937_64& rng, double span = 5.0) {
  std::uniform_real_distribution<double> u(0.0, span);
  Eigen::VectorXd x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

inline Dataset random_dataset(Eigen::Index n, std::mt19937_64& rng, double span = 5.0) {
  std::normal_distribution<double> normal;
  Dataset d{random_inputs(n, rng, span), Eigen::VectorXd(n)};
  for (auto& v : d.y) v = normal(rng);
  return d;
}

/// Inducing locations whose K_uu has condition number at most max_cond.
/// Nearly coincident points (relative to the lengthscale) make K_uu singular
/// to working precision, where the bound is dominated by jitter and finite
/// differences cannot resolve its gradient. Redraws up to 100 times.
inline Eigen::VectorXd well_conditioned_inducing(const KernelSpec& spec, Eigen::Index m,
                                                 std::mt19937_64& rng, double span = 5.0,
                                                 double max_cond = 1e6) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::VectorXd z = random_inputs(m, rng, span);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross_gram(spec, z, z));
    const auto& s = svd.singularValues();
    if (s(0) <= max_cond * s(m - 1)) return z;
  }
  return random_inputs(1, rng, span);
}

inline constexpr KernelFamily kFamilies[] = {KernelFamily::SE, KernelFamily::Laplace,
                                             KernelFamily::RQ, KernelFamily::LocPer};

}  // namespace plgp::testing

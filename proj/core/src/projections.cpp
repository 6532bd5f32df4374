#include "plgp/projections.hpp"
#include "plgp/random.hpp"

#include "plgp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace plgp {

std::string_view to_string(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::Sphere: return "Sphere";
    case ProjectionKind::Repulsive: return "Repulsive";
    case ProjectionKind::Localised: return "Localised";
    case ProjectionKind::OneHot: return "OneHot";
    case ProjectionKind::Eigen: return "Eigen";
    case ProjectionKind::Identity: return "Identity";
    case ProjectionKind::Custom: return "Custom";
  }
  return "?";
}

ProjectionKind projection_kind_from_string(std::string_view name) {
  for (auto k : {ProjectionKind::Sphere, ProjectionKind::Repulsive, ProjectionKind::Localised,
                 ProjectionKind::OneHot, ProjectionKind::Eigen, ProjectionKind::Identity,
                 ProjectionKind::Custom}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown projection kind '" + std::string(name) + "'");
}

ProjectionMatrix::ProjectionMatrix(Eigen::MatrixXd omega, ProjectionKind kind, std::uint64_t seed)
    : omega_(std::move(omega)), kind_(kind), seed_(seed) {
  if (omega_.cols() < 1 || omega_.rows() < omega_.cols()) {
    throw std::invalid_argument("projection matrix must be n x k with 1 <= k <= n");
  }
  if (!omega_.allFinite()) throw std::invalid_argument("projection matrix has non-finite entries");
  for (Eigen::Index j = 0; j < omega_.cols(); ++j) {
    if (std::abs(omega_.col(j).norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("projection column " + std::to_string(j) + " is not unit norm");
    }
  }
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(omega_);
  const auto& sv = svd.singularValues();
  if (sv.minCoeff() <= 1e-10 * sv.maxCoeff()) {
    throw std::invalid_argument("projection matrix is rank deficient");
  }
}

ProjectionMatrix ProjectionMatrix::permuted(const std::vector<Eigen::Index>& order) const {
  if (static_cast<Eigen::Index>(order.size()) != k()) {
    throw std::invalid_argument("permutation length must equal k");
  }
  Eigen::MatrixXd out(n(), k());
  for (Eigen::Index j = 0; j < k(); ++j) out.col(j) = omega_.col(order[static_cast<std::size_t>(j)]);
  return {std::move(out), kind_, seed_};
}

namespace {

void check_dims(Eigen::Index n, Eigen::Index k) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("projection requires 1 <= k <= n");
}

Eigen::MatrixXd gaussian_columns(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 rng = make_rng(seed, RandomStream::Sphere);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd w(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) w(i, j) = normal(rng);
    w.col(j).normalize();
  }
  return w;
}

}  // namespace

double frame_potential(const Eigen::MatrixXd& omega) {
  Eigen::MatrixXd g = omega.transpose() * omega;
  return 0.5 * (g.squaredNorm() - g.diagonal().squaredNorm());
}

ProjectionMatrix sphere(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  check_dims(n, k);
  return {gaussian_columns(n, k, seed), ProjectionKind::Sphere, seed};
}

ProjectionMatrix repulsive(Eigen::Index n, Eigen::Index k, std::uint64_t seed,
                           const RepulsiveOptions& options, std::vector<double>* history) {
  check_dims(n, k);
  if (options.steps < 0 || !(options.step_size > 0.0)) {
    throw std::invalid_argument("repulsive: steps >= 0 and step_size > 0 required");
  }
  Eigen::MatrixXd w = gaussian_columns(n, k, seed);
  double potential = frame_potential(w);
  if (history) history->assign(1, potential);
  for (int step = 0; step < options.steps && k > 1; ++step) {
    Eigen::MatrixXd g = w.transpose() * w;
    g.diagonal().setZero();
    Eigen::MatrixXd grad = 2.0 * w * g;
    // Project onto the tangent space of each column's sphere.
    const Eigen::VectorXd radial = (w.array() * grad.array()).colwise().sum().transpose();
    grad -= w * radial.asDiagonal();
    double eta = options.step_size;
    for (int halving = 0; halving < 40; ++halving, eta *= 0.5) {
      Eigen::MatrixXd trial = w - eta * grad;
      trial.colwise().normalize();
      const double p = frame_potential(trial);
      if (p <= potential) {
        w = std::move(trial);
        potential = p;
        break;
      }
    }
    if (history) history->push_back(potential);
  }
  return {std::move(w), ProjectionKind::Repulsive, seed};
}

ProjectionMatrix localised(const Eigen::VectorXd& x, Eigen::Index k, double width_factor) {
  const Eigen::Index n = x.size();
  check_dims(n, k);
  if (!x.allFinite()) throw std::invalid_argument("localised: non-finite inputs");
  if (!(width_factor > 0.0)) throw std::invalid_argument("localised: width_factor must be positive");
  const double lo = x.minCoeff(), hi = x.maxCoeff();
  const double range = hi - lo;
  if (k > 1 && range <= 0.0) {
    throw std::invalid_argument("localised: degenerate inputs (all equal) with k > 1");
  }
  const double spacing = k > 1 ? range / static_cast<double>(k - 1) : (range > 0.0 ? range : 1.0);
  const double width = width_factor * spacing;
  Eigen::MatrixXd w(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double centre = k > 1 ? lo + spacing * static_cast<double>(j) : 0.5 * (lo + hi);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = (x[i] - centre) / width;
      w(i, j) = std::exp(-0.5 * d * d);
    }
    const double norm = w.col(j).norm();
    if (!(norm > 0.0)) throw std::invalid_argument("localised: bump has no support on x");
    w.col(j) /= norm;
  }
  return {std::move(w), ProjectionKind::Localised, 0};
}

ProjectionMatrix one_hot(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  check_dims(n, k);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::mt19937_64 rng = make_rng(seed, RandomStream::OneHot);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, k);
  for (Eigen::Index j = 0; j < k; ++j) w(idx[static_cast<std::size_t>(j)], j) = 1.0;
  return {std::move(w), ProjectionKind::OneHot, seed};
}

ProjectionMatrix eigen(const GramMatrix& gram, Eigen::Index k, EigenOrder which) {
  const Eigen::Index n = gram.values.rows();
  check_dims(n, k);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram.values);
  if (es.info() != Eigen::Success) throw NumericalError("eigen: eigendecomposition failed");
  // Eigen returns ascending eigenvalues.
  Eigen::MatrixXd w(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index col = which == EigenOrder::Top ? n - 1 - j : j;
    w.col(j) = es.eigenvectors().col(col).normalized();
  }
  return {std::move(w), ProjectionKind::Eigen, 0};
}

ProjectionMatrix identity_projection(Eigen::Index n) {
  return {Eigen::MatrixXd::Identity(n, n), ProjectionKind::Identity, 0};
}

}  // namespace plgp

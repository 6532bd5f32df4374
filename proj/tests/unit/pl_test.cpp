#include "plgp/pl.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace plgp {
namespace {

using testing::kFamilies;
using testing::random_dataset;
using testing::random_spec;

ProjectionMatrix rotation(Eigen::Index n, std::mt19937_64& rng) {
  return ProjectionMatrix(testing::random_rotation(n, rng), ProjectionKind::Custom);
}

TEST(Pl, ProjectIdentityAndOneHot) {
  std::mt19937_64 rng(1);
  const Eigen::VectorXd y = random_dataset(9, rng).y;
  EXPECT_EQ(project(identity_projection(9), y).z, y);
  const auto oh = one_hot(9, 4, 3);
  const auto pd = project(oh, y);
  for (Eigen::Index j = 0; j < 4; ++j) {
    Eigen::Index r = 0;
    oh.omega().col(j).maxCoeff(&r);
    EXPECT_EQ(pd.z[j], y[r]);
  }
  EXPECT_EQ(pd.omega.k(), 4);
  EXPECT_THROW(project(oh, Eigen::VectorXd::Zero(8)), std::invalid_argument);
}

TEST(Pl, ProjectionRespectsSpectralNorm) {
  std::mt19937_64 rng(2);
  for (int draw = 0; draw < 20; ++draw) {
    const auto omega = sphere(30, 1 + static_cast<Eigen::Index>(rng() % 30), rng());
    const Eigen::VectorXd y = random_dataset(30, rng).y;
    const double s_max = Eigen::JacobiSVD<Eigen::MatrixXd>(omega.omega()).singularValues()(0);
    EXPECT_LE(project(omega, y).z.norm(), s_max * y.norm() * (1 + 1e-12));
  }
}

TEST(Pl, IdentityProjectionEqualsExact) {
  std::mt19937_64 rng(3);
  for (auto f : kFamilies) {
    const auto spec = random_spec(f, rng);
    const Dataset d = random_dataset(25, rng);
    const double exact = nll_exact(spec, d);
    EXPECT_NEAR(nll_pl(spec, identity_projection(25), d), exact, 1e-10 * std::max(1.0, std::abs(exact)));
    EXPECT_LT(testing::rel_err(nll_pl_grad(spec, identity_projection(25), d), nll_exact_grad(spec, d)),
              1e-10);
  }
}

TEST(Pl, OrthogonalFullRankEqualsExact) {
  std::mt19937_64 rng(4);
  for (auto f : kFamilies) {
    const auto spec = random_spec(f, rng);
    const Dataset d = random_dataset(30, rng);
    const double exact = nll_exact(spec, d);
    EXPECT_NEAR(nll_pl(spec, rotation(30, rng), d), exact, 1e-8 * std::max(1.0, std::abs(exact)));
  }
}

// Change of variables: a full-rank non-orthogonal Omega adds log|det Omega|.
TEST(Pl, FullRankNonOrthogonalAddsVolumeTerm) {
  std::mt19937_64 rng(5);
  const auto spec = KernelSpec::rq(1.2, 1.4, 0.8, 0.2);
  const Dataset d = random_dataset(20, rng);
  const auto omega = sphere(20, 20, 6);
  const double log_det = std::log(std::abs(omega.omega().determinant()));
  EXPECT_NEAR(nll_pl(spec, omega, d), nll_exact(spec, d) + log_det, 1e-8);
}

TEST(Pl, WhiteNoiseSingleColumnClosedForm) {
  std::mt19937_64 rng(7);
  const Dataset d = random_dataset(15, rng);
  const auto omega = sphere(15, 1, 8);
  const double z = omega.omega().col(0).dot(d.y);
  const double s2 = 0.45;
  const double expected = 0.5 * (z * z / s2 + std::log(s2) + std::log(2 * std::numbers::pi));
  EXPECT_NEAR(nll_pl(KernelSpec::white(s2), omega, d), expected, 1e-13);
}

// Averaging n * nll_pl over uniform unit directions recovers the exact NLL of
// a pure-noise model, since E[(w^T y)^2] = |y|^2 / n.
TEST(Pl, PureNoiseExpectationMatchesExact) {
  std::mt19937_64 rng(9);
  const Eigen::Index n = 50;
  const Dataset d = random_dataset(n, rng);
  const auto spec = KernelSpec::white(0.7);
  const int draws = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double v = static_cast<double>(n) * nll_pl(spec, sphere(n, 1, static_cast<std::uint64_t>(i)), d);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  EXPECT_LT(std::abs(mean - nll_exact(spec, d)), 3.0 * se);
}

TEST(Pl, ScaleEquivariance) {
  std::mt19937_64 rng(10);
  const auto spec = KernelSpec::laplace(1.1, 0.9, 0.15);
  Dataset d = random_dataset(20, rng);
  const auto omega = sphere(20, 6, 11);
  const double base = nll_pl(spec, omega, d);
  d.y *= 2.0;
  const auto scaled = KernelSpec::laplace(4.4, 0.9, 0.6);
  EXPECT_NEAR(nll_pl(scaled, omega, d) - base, 6 * std::log(2.0), 1e-10);
}

TEST(Pl, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(12);
  for (auto f : kFamilies) {
    for (int draw = 0; draw < 5; ++draw) {
      const auto spec = random_spec(f, rng);
      const Eigen::Index n = 10 + static_cast<Eigen::Index>(rng() % 31);
      const Dataset d = random_dataset(n, rng);
      const auto omega = sphere(n, 1 + static_cast<Eigen::Index>(rng() % 8), rng());
      const auto vg = nll_pl_with_grad(spec, omega, d);
      EXPECT_NEAR(vg.value, nll_pl(spec, omega, d), 1e-12 * std::max(1.0, std::abs(vg.value)));
      const auto num = testing::central_difference(
          [&](const Eigen::VectorXd& p) { return nll_pl(KernelSpec::from_packed(f, p), omega, d); },
          spec.packed());
      EXPECT_LT(testing::componentwise_rel_err(vg.gradient, num), 1e-5) << to_string(f);
    }
  }
}

TEST(Pl, NoiseGradientSingleOrthonormalColumn) {
  std::mt19937_64 rng(13);
  const auto spec = KernelSpec::se(1.3, 2.0, 0.25);
  const Dataset d = random_dataset(12, rng);
  const auto omega = one_hot(12, 1, 14);
  const Eigen::VectorXd w = omega.omega().col(0);
  const double c = w.dot(gram(spec, d.x, true).values * w);
  const double z = w.dot(d.y);
  const double expected = 0.5 * (1.0 / c - z * z / (c * c));
  EXPECT_NEAR(nll_pl_grad(spec, omega, d)[2], expected, 1e-12);
}

TEST(Pl, DimensionMismatchThrows) {
  std::mt19937_64 rng(15);
  const Dataset d = random_dataset(10, rng);
  EXPECT_THROW(nll_pl(KernelSpec::se(1, 1, 0.1), sphere(11, 3, 0), d), std::invalid_argument);
}

}  // namespace
}  // namespace plgp

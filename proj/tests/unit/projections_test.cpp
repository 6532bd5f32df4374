#include "plgp/projections.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

namespace plgp {
namespace {

void expect_valid(const ProjectionMatrix& p) {
  for (Eigen::Index j = 0; j < p.k(); ++j) EXPECT_NEAR(p.omega().col(j).norm(), 1.0, 1e-12);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(p.omega());
  EXPECT_GT(svd.singularValues().minCoeff(), 1e-10 * svd.singularValues().maxCoeff());
}

TEST(Projections, SphereColumnsAreUnitAndDeterministic) {
  const auto a = sphere(50, 10, 1);
  expect_valid(a);
  EXPECT_EQ(a.omega(), sphere(50, 10, 1).omega());
  EXPECT_NE(a.omega(), sphere(50, 10, 2).omega());
  EXPECT_EQ(a.kind(), ProjectionKind::Sphere);
  EXPECT_EQ(a.seed(), 1u);
}

TEST(Projections, SquareSphereIsInvertible) {
  const auto p = sphere(30, 30, 3);
  expect_valid(p);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(p.omega());
  EXPECT_TRUE(std::isfinite(svd.singularValues()(0) / svd.singularValues()(29)));
}

// Monte Carlo: E|w_i^T w_j| for independent uniform unit vectors is close to
// sqrt(2 / (pi n)) for large n.
TEST(Projections, SphereInnerProductMoment) {
  const Eigen::Index n = 500, k = 100;
  const auto p = sphere(n, k, 4);
  const Eigen::MatrixXd g = p.omega().transpose() * p.omega();
  double sum = 0.0;
  int pairs = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j, ++pairs) sum += std::abs(g(i, j));
  }
  const double expected = std::sqrt(2.0 / (std::numbers::pi * static_cast<double>(n)));
  EXPECT_NEAR(sum / pairs, expected, 0.2 * expected);
}

TEST(Projections, RejectsKGreaterThanN) {
  EXPECT_THROW(sphere(5, 6, 0), std::invalid_argument);
  EXPECT_THROW(repulsive(5, 6, 0), std::invalid_argument);
  EXPECT_THROW(one_hot(5, 6, 0), std::invalid_argument);
  EXPECT_THROW(localised(Eigen::VectorXd::LinSpaced(5, 0, 1), 6), std::invalid_argument);
}

TEST(Projections, RankDeficientMatrixIsRejected) {
  Eigen::MatrixXd w(4, 2);
  w.col(0) << 1, 0, 0, 0;
  w.col(1) = w.col(0);
  EXPECT_THROW(ProjectionMatrix(w, ProjectionKind::Custom), std::invalid_argument);
  w.col(1) << 0, 2, 0, 0;
  EXPECT_THROW(ProjectionMatrix(w, ProjectionKind::Custom), std::invalid_argument);
}

TEST(Projections, RepulsionReducesCoherence) {
  const Eigen::Index n = 40, k = 20;
  std::vector<double> history;
  const auto rep = repulsive(n, k, 5, {}, &history);
  const auto base = sphere(n, k, 5);
  expect_valid(rep);
  auto max_coherence = [](const Eigen::MatrixXd& w) {
    Eigen::MatrixXd g = (w.transpose() * w).cwiseAbs();
    g.diagonal().setZero();
    return g.maxCoeff();
  };
  EXPECT_LT(max_coherence(rep.omega()), max_coherence(base.omega()));
  ASSERT_EQ(history.size(), 201u);
  EXPECT_NEAR(history.front(), frame_potential(base.omega()), 1e-12);
  for (std::size_t i = 1; i < history.size(); ++i) EXPECT_LE(history[i], history[i - 1]);
  EXPECT_LT(history.back(), history.front());
}

TEST(Projections, RepulsiveSingleColumnEqualsSphere) {
  EXPECT_EQ(repulsive(25, 1, 9).omega(), sphere(25, 1, 9).omega());
}

// Each repulsion step adds multiples of the other columns, so the column
// space of the starting draw never changes.
TEST(Projections, RepulsionKeepsColumnSpace) {
  const Eigen::Index n = 30, k = 8;
  auto projector = [](const Eigen::MatrixXd& w) -> Eigen::MatrixXd {
    return w * (w.transpose() * w).ldlt().solve(w.transpose());
  };
  const Eigen::MatrixXd a = projector(repulsive(n, k, 3).omega());
  const Eigen::MatrixXd b = projector(sphere(n, k, 3).omega());
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Projections, LocalisedSingleBumpIsCentred) {
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(21, 0.0, 20.0);
  const auto p = localised(x, 1);
  expect_valid(p);
  Eigen::Index arg = 0;
  p.omega().col(0).maxCoeff(&arg);
  EXPECT_EQ(arg, 10);
}

TEST(Projections, LocalisedNarrowBumpsAreNearlyDiagonal) {
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(30, 0.0, 29.0);
  const auto p = localised(x, 30, 0.2);
  expect_valid(p);
  EXPECT_GT(p.omega().diagonal().minCoeff(), 0.99);
}

TEST(Projections, LocalisedDegenerateInputs) {
  EXPECT_THROW(localised(Eigen::VectorXd::Constant(5, 1.0), 2), std::invalid_argument);
  EXPECT_NO_THROW(localised(Eigen::VectorXd::Constant(5, 1.0), 1));
}

TEST(Projections, OneHotSelectsDistinctRows) {
  const auto p = one_hot(20, 7, 11);
  expect_valid(p);
  EXPECT_TRUE((p.omega().transpose() * p.omega()).isIdentity(0.0));
  std::set<Eigen::Index> rows;
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(20, 100, 119);
  const Eigen::VectorXd z = p.omega().transpose() * y;
  for (Eigen::Index j = 0; j < 7; ++j) {
    Eigen::Index r = 0;
    p.omega().col(j).maxCoeff(&r);
    rows.insert(r);
    EXPECT_EQ(z[j], y[r]);
  }
  EXPECT_EQ(rows.size(), 7u);
}

TEST(Projections, FullOneHotIsPermutation) {
  const auto p = one_hot(12, 12, 2);
  EXPECT_TRUE((p.omega() * p.omega().transpose()).isIdentity(0.0));
}

TEST(Projections, EigenPicksTopDirection) {
  GramMatrix g{Eigen::Vector3d(3, 2, 1).asDiagonal(), true};
  const auto top = eigen(g, 1, EigenOrder::Top);
  EXPECT_NEAR(std::abs(top.omega()(0, 0)), 1.0, 1e-14);
  const auto bottom = eigen(g, 1, EigenOrder::Bottom);
  EXPECT_NEAR(std::abs(bottom.omega()(2, 0)), 1.0, 1e-14);
  const auto all = eigen(g, 3, EigenOrder::Top);
  EXPECT_TRUE((all.omega().transpose() * all.omega()).isIdentity(1e-12));
}

TEST(Projections, AllConstructorsAreDeterministic) {
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(40, 0, 39);
  EXPECT_EQ(repulsive(40, 8, 3).omega(), repulsive(40, 8, 3).omega());
  EXPECT_EQ(one_hot(40, 8, 3).omega(), one_hot(40, 8, 3).omega());
  EXPECT_EQ(localised(x, 8).omega(), localised(x, 8).omega());
  const auto g = gram(KernelSpec::se(1.0, 3.0, 0.1), x, true);
  EXPECT_EQ(eigen(g, 5, EigenOrder::Top).omega(), eigen(g, 5, EigenOrder::Top).omega());
}

TEST(Projections, FramePotentialOfOrthonormalColumnsIsZero) {
  EXPECT_NEAR(frame_potential(Eigen::MatrixXd::Identity(6, 4)), 0.0, 0.0);
  Eigen::MatrixXd w(2, 2);
  w << 1, std::sqrt(0.5), 0, std::sqrt(0.5);
  EXPECT_NEAR(frame_potential(w), 0.5, 1e-15);
}

}  // namespace
}  // namespace plgp

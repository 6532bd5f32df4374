#include "plgp/infoloss.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

namespace plgp {
namespace {

using testing::kFamilies;
using testing::random_inputs;
using testing::random_spec;

// Gaussian Fisher information oracles, written against the raw formulas.
double oracle_fisher_full(const Eigen::MatrixXd& k, const Eigen::MatrixXd& dk) {
  const Eigen::MatrixXd a = k.inverse() * dk;
  return 0.5 * (a * a).trace();
}

double oracle_fisher_proj(const Eigen::MatrixXd& k, const Eigen::MatrixXd& dk, const Eigen::MatrixXd& w) {
  const Eigen::MatrixXd a = (w.transpose() * k * w).inverse() * (w.transpose() * dk * w);
  return 0.5 * (a * a).trace();
}

std::vector<ProjectionMatrix> all_families(const Eigen::VectorXd& x, const GramMatrix& g,
                                           Eigen::Index k, std::uint64_t seed) {
  const Eigen::Index n = x.size();
  return {sphere(n, k, seed), repulsive(n, k, seed, {50, 0.1}), localised(x, k), one_hot(n, k, seed),
          eigen(g, k, EigenOrder::Top)};
}

TEST(InfoLoss, ConditionalMomentsMatchBasisCompletionOracle) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd k = testing::random_spd(8, rng);
  const auto omega = sphere(8, 3, 2);
  const auto m = conditional_moments({k, true}, omega);
  const auto [coeff, cov] = testing::condition_by_basis_completion(k, omega.omega());
  EXPECT_LT((m.mu_coeff - coeff).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((m.sigma - cov).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(InfoLoss, FullRankOrthogonalLeavesNoConditionalVariance) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd k = testing::random_spd(10, rng);
  const ProjectionMatrix omega(testing::random_rotation(10, rng), ProjectionKind::Custom);
  const auto m = conditional_moments({k, true}, omega);
  const double lmax = descending_eigenvalues(k)[0];
  EXPECT_LT(m.sigma.cwiseAbs().maxCoeff(), 1e-8 * lmax);
}

TEST(InfoLoss, SingleColumnWhiteCovariance) {
  const Eigen::Index n = 7;
  const auto omega = sphere(n, 1, 4);
  const auto m = conditional_moments({Eigen::MatrixXd::Identity(n, n), true}, omega);
  const Eigen::VectorXd w = omega.omega().col(0);
  const Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(n, n) - w * w.transpose();
  EXPECT_LT((m.sigma - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(m.sigma.trace(), n - 1.0, 1e-13);
}

TEST(InfoLoss, FisherHelpersMatchOracles) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd k = testing::random_spd(12, rng);
  Eigen::MatrixXd dk = testing::random_spd(12, rng) - testing::random_spd(12, rng);
  const auto omega = sphere(12, 4, 6);
  EXPECT_NEAR(fisher_full(k, dk), oracle_fisher_full(k, dk), 1e-10);
  EXPECT_NEAR(fisher_projected(k, dk, omega), oracle_fisher_proj(k, dk, omega.omega()), 1e-10);
}

// Central cross-check: the closed-form loss equals the drop in Fisher
// information, and is never negative.
TEST(InfoLoss, DeltaEqualsFisherDifference) {
  std::mt19937_64 rng(7);
  int configs = 0;
  for (auto f : kFamilies) {
    for (int draw = 0; draw < 3; ++draw) {
      const auto spec = random_spec(f, rng);
      const Eigen::Index n = 8 + static_cast<Eigen::Index>(rng() % 53);
      const Eigen::VectorXd x = random_inputs(n, rng, 0.5 * static_cast<double>(n));
      const GramMatrix g = gram(spec, x, true);
      for (Eigen::Index k : {Eigen::Index{1}, n / 4, n / 2}) {
        for (const auto& omega : all_families(x, g, k, rng())) {
          for (std::size_t j = 0; j < spec.num_hyper(); ++j) {
            const Eigen::MatrixXd dk = gram_grad(spec, x, j);
            const double iy = oracle_fisher_full(g.values, dk);
            const double iz = oracle_fisher_proj(g.values, dk, omega.omega());
            const double di = delta_information(spec, x, omega, j);
            EXPECT_NEAR(di, iy - iz, 1e-6 * iy)
                << to_string(f) << " " << to_string(omega.kind()) << " k=" << k << " j=" << j;
            EXPECT_GE(di, -1e-8 * iy);
          }
          ++configs;
        }
      }
    }
  }
  EXPECT_GE(configs, 50);
}

TEST(InfoLoss, NoLossAtFullRank) {
  std::mt19937_64 rng(8);
  const auto spec = KernelSpec::se(1.5, 2.0, 0.1);
  const Eigen::VectorXd x = random_inputs(20, rng, 10.0);
  const GramMatrix g = gram(spec, x, true);
  for (const auto& omega : {identity_projection(20), eigen(g, 20, EigenOrder::Top),
                            ProjectionMatrix(testing::random_rotation(20, rng), ProjectionKind::Custom)}) {
    for (std::size_t j = 0; j < spec.num_hyper(); ++j) {
      const double iy = fisher_full(g.values, gram_grad(spec, x, j));
      EXPECT_LE(std::abs(delta_information(spec, x, omega, j)), 1e-8 * iy);
    }
  }
}

// Monte Carlo oracle for E_Z[Var(s(Y) | Z)]: draw Z, then two independent
// conditional samples of Y; half the squared score difference is unbiased.
TEST(InfoLoss, MonteCarloConditionalScoreVariance) {
  std::mt19937_64 rng(9);
  const Eigen::Index n = 6, k = 2;
  const auto spec = KernelSpec::se(1.0, 1.5, 0.2);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(n, 0.0, 5.0);
  const Eigen::MatrixXd kmat = gram(spec, x, true).values;
  const Eigen::MatrixXd dk = gram_grad(spec, x, 1);
  const auto omega = sphere(n, k, 10);
  const Eigen::MatrixXd& w = omega.omega();
  const auto [coeff, unused] = testing::condition_by_basis_completion(kmat, w);
  const Eigen::MatrixXd chol = kmat.llt().matrixL();
  const Eigen::MatrixXd kinv = kmat.inverse();
  const Eigen::MatrixXd kbar = kinv * dk * kinv;
  const double offset = -0.5 * (kinv * dk).trace();
  auto score = [&](const Eigen::VectorXd& y) { return offset + 0.5 * y.dot(kbar * y); };
  std::normal_distribution<double> normal;
  auto draw = [&] {
    Eigen::VectorXd e(n);
    for (auto& v : e) v = normal(rng);
    return Eigen::VectorXd(chol * e);
  };
  const int draws = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Eigen::VectorXd z = w.transpose() * draw();
    // Conditional sample by correcting an unconditional draw.
    const Eigen::VectorXd a = draw(), b = draw();
    const Eigen::VectorXd ya = a + coeff * (z - w.transpose() * a);
    const Eigen::VectorXd yb = b + coeff * (z - w.transpose() * b);
    const double v = 0.5 * std::pow(score(ya) - score(yb), 2);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  EXPECT_LT(std::abs(mean - delta_information(kmat, dk, omega)), 3.0 * se);
}

TEST(InfoLoss, AppendingColumnsNeverRaisesTrace) {
  std::mt19937_64 rng(11);
  const auto spec = KernelSpec::rq(2.0, 1.0, 1.5, 0.1);
  const Eigen::VectorXd x = random_inputs(40, rng, 20.0);
  const GramMatrix g = gram(spec, x, true);
  const auto full = sphere(40, 20, 12);
  double prev = g.values.trace();
  for (Eigen::Index k = 1; k <= 20; ++k) {
    const ProjectionMatrix sub(full.omega().leftCols(k), ProjectionKind::Sphere);
    const double t = conditional_moments(g, sub).sigma.trace();
    EXPECT_LE(t, prev + 1e-8);
    prev = t;
  }
}

TEST(InfoLoss, SpectraInvariantToColumnOrder) {
  std::mt19937_64 rng(13);
  const auto spec = KernelSpec::locper(1.0, 3.0, 1.0, 8.0, 0.1);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(30, 0, 29);
  const auto omega = sphere(30, 8, 14);
  std::vector<Eigen::Index> order(8);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto a = spectra_report(spec, x, {omega});
  const auto b = spectra_report(spec, x, {omega.permuted(order)});
  const auto& ra = a.projections[0];
  const auto& rb = b.projections[0];
  EXPECT_NEAR(ra.sigma_trace, rb.sigma_trace, 1e-10);
  EXPECT_LT((ra.sigma_spectrum - rb.sigma_spectrum).cwiseAbs().maxCoeff(), 1e-10);
  for (std::size_t j = 0; j < ra.hyper.size(); ++j) {
    EXPECT_NEAR(ra.hyper[j].delta_i, rb.hyper[j].delta_i, 1e-8 * ra.hyper[j].fisher_full);
  }
}

TEST(InfoLoss, TopEigenProjectionKeepsTrailingSpectrum) {
  std::mt19937_64 rng(15);
  const auto spec = KernelSpec::se(5.0, 10.0, 0.1);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(100, 0, 99);
  const GramMatrix g = gram(spec, x, true);
  // Independent full eigendecomposition.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.values);
  const Eigen::VectorXd asc = es.eigenvalues();
  for (Eigen::Index k : {10, 25, 60}) {
    const auto report = spectra_report(spec, x, {eigen(g, k, EigenOrder::Top)});
    const double expected = asc.head(100 - k).sum();
    EXPECT_NEAR(report.projections[0].sigma_trace, expected, 1e-8 * expected);
    const Eigen::VectorXd s = report.projections[0].sigma_spectrum;
    const Eigen::VectorXd tail = asc.head(100 - k).reverse();
    EXPECT_LT((s.head(100 - k) - tail).cwiseAbs().maxCoeff(), 1e-8 * asc.maxCoeff());
    EXPECT_LT(s.tail(k).cwiseAbs().maxCoeff(), 1e-8 * asc.maxCoeff());
  }
}

TEST(InfoLoss, TraceBoundsHoldForEveryFamily) {
  std::mt19937_64 rng(16);
  const auto spec = KernelSpec::se(5.0, 10.0, 0.1);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(120, 0, 119);
  const GramMatrix g = gram(spec, x, true);
  const Eigen::VectorXd spectrum = descending_eigenvalues(g.values);
  for (Eigen::Index k : {5, 30, 60}) {
    const TraceBounds b = trace_bounds(spectrum, k);
    for (const auto& omega : all_families(x, g, k, rng())) {
      const double t = conditional_moments(g, omega).sigma.trace();
      EXPECT_GE(t, b.lower * (1 - 1e-10)) << to_string(omega.kind());
      EXPECT_LE(t, b.upper * (1 + 1e-10)) << to_string(omega.kind());
    }
  }
}

TEST(InfoLoss, TraceBoundsArithmetic) {
  Eigen::VectorXd s(4);
  s << 4, 3, 2, 1;
  const auto b = trace_bounds(s, 1);
  EXPECT_DOUBLE_EQ(b.lower, 6.0);
  EXPECT_DOUBLE_EQ(b.upper, 9.0);
  EXPECT_DOUBLE_EQ(trace_bounds(s, 4).upper, 0.0);
  EXPECT_THROW(trace_bounds(s, 5), std::invalid_argument);
}

TEST(InfoLoss, SphereReducesTraceMoreThanOneHot) {
  const auto spec = KernelSpec::se(5.0, 10.0, 0.1);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(500, 0, 499);
  const auto report = spectra_report(spec, x, {sphere(500, 100, 1), one_hot(500, 100, 1)});
  EXPECT_LT(report.projections[0].sigma_trace, report.projections[1].sigma_trace);
  EXPECT_EQ(report.projections[0].label, "Sphere");
  EXPECT_EQ(report.projections[1].label, "OneHot");
  EXPECT_LE(report.projections[1].sigma_trace, report.gram_trace);
}

TEST(InfoLoss, ConditionalCovarianceIsPsd) {
  std::mt19937_64 rng(17);
  for (auto f : kFamilies) {
    const auto spec = random_spec(f, rng);
    const Eigen::VectorXd x = random_inputs(40, rng, 20.0);
    const GramMatrix g = gram(spec, x, true);
    const auto m = conditional_moments(g, sphere(40, 10, rng()));
    const Eigen::VectorXd ev = descending_eigenvalues(m.sigma);
    EXPECT_GE(ev.minCoeff(), -1e-8 * ev.maxCoeff());
    EXPECT_LE(m.sigma.trace(), g.values.trace() + 1e-8);
  }
}

}  // namespace
}  // namespace plgp

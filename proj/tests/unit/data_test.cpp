#include "plgp/data.hpp"

#include "plgp/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

namespace plgp {
namespace {

namespace fs = std::filesystem;

fs::path write_fixture(const std::string& name, const std::string& body) {
  const fs::path p = fs::path(::testing::TempDir()) / name;
  std::ofstream(p) << body;
  return p;
}

TEST(Data, LoadsThreeRowFixtureWithHeader) {
  const auto p = write_fixture("three.csv", "t,value\n0,1.5\n1,2.5\n2,-3\n");
  const Dataset d = load_csv(p, std::string("t"), std::string("value"));
  ASSERT_EQ(d.size(), 3);
  EXPECT_EQ(d.x, Eigen::Vector3d(0, 1, 2));
  EXPECT_EQ(d.y, Eigen::Vector3d(1.5, 2.5, -3));
  const Dataset by_index = load_csv(p, std::size_t{0}, std::size_t{1});
  EXPECT_EQ(by_index.y, d.y);
  // Idempotent.
  EXPECT_EQ(load_csv(p, std::size_t{0}, std::size_t{1}).y, by_index.y);
}

TEST(Data, LoadsHeaderlessFileAndLimits) {
  const auto p = write_fixture("plain.csv", "5,50\n6,60\n7,70\n8,80\n");
  const Dataset d = load_csv(p, std::size_t{0}, std::size_t{1}, 2);
  ASSERT_EQ(d.size(), 2);
  EXPECT_EQ(d.x, Eigen::Vector2d(5, 6));
  const Dataset s = load_series_csv(p, std::size_t{1});
  EXPECT_EQ(s.x, Eigen::Vector4d(0, 1, 2, 3));
  EXPECT_EQ(s.y, Eigen::Vector4d(50, 60, 70, 80));
}

TEST(Data, ReportsBadRowsWithLineNumbers) {
  const auto bad = write_fixture("bad.csv", "a,b\n1,2\n3,oops\n");
  try {
    load_csv(bad, std::size_t{0}, std::size_t{1});
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  const auto nan = write_fixture("nan.csv", "1,2\n3,nan\n");
  EXPECT_THROW(load_csv(nan, std::size_t{0}, std::size_t{1}), IoError);
  EXPECT_THROW(load_csv(fs::path(::testing::TempDir()) / "missing.csv", std::size_t{0}, std::size_t{1}),
               IoError);
  const auto p = write_fixture("cols.csv", "a,b\n1,2\n");
  EXPECT_THROW(load_csv(p, std::string("a"), std::string("c")), IoError);
  EXPECT_THROW(load_csv(p, std::size_t{0}, std::size_t{5}), IoError);
  EXPECT_THROW(load_csv(write_fixture("empty.csv", "a,b\n"), std::size_t{0}, std::size_t{1}), IoError);
}

TEST(Data, SunspotSeries) {
  const Dataset d = load_series_csv(fs::path(PLGP_TEST_DATA_DIR) / "sunspots_monthly.csv",
                                    std::string("sunspots"));
  EXPECT_EQ(d.size(), 2820);
  EXPECT_GE(d.y.minCoeff(), 0.0);
  EXPECT_EQ(d.x[2819], 2819.0);
}

Dataset ramp(Eigen::Index n) {
  return {Eigen::VectorXd::LinSpaced(n, 0, static_cast<double>(n - 1)),
          Eigen::VectorXd::LinSpaced(n, 100, static_cast<double>(99 + n))};
}

TEST(Data, PrefixSplit) {
  const auto [train, val] = split(ramp(10), 0.8, 0, SplitMode::Prefix);
  ASSERT_EQ(train.size(), 8);
  ASSERT_EQ(val.size(), 2);
  EXPECT_EQ(train.x[7], 7.0);
  EXPECT_EQ(val.x[0], 8.0);
}

TEST(Data, FullFractionLeavesValidationEmpty) {
  const auto [train, val] = split(ramp(10), 1.0, 0, SplitMode::Random);
  EXPECT_EQ(train.size(), 10);
  EXPECT_EQ(val.size(), 0);
}

TEST(Data, RandomSplitPartitionsAndIsReproducible) {
  const Dataset d = ramp(10000);
  const auto [train, val] = split(d, 0.8, 42, SplitMode::Random);
  EXPECT_EQ(train.size(), 8000);
  EXPECT_EQ(val.size(), 2000);
  std::set<double> seen;
  for (auto v : train.x) seen.insert(v);
  for (auto v : val.x) seen.insert(v);
  EXPECT_EQ(seen.size(), 10000u);
  for (Eigen::Index i = 0; i < train.size(); ++i) EXPECT_EQ(train.y[i], train.x[i] + 100);
  const auto again = split(d, 0.8, 42, SplitMode::Random);
  EXPECT_EQ(again.first.x, train.x);
  EXPECT_NE(split(d, 0.8, 43, SplitMode::Random).first.x, train.x);
}

TEST(Data, SplitRejectsBadFractions) {
  EXPECT_THROW(split(ramp(10), 0.0, 0, SplitMode::Prefix), std::invalid_argument);
  EXPECT_THROW(split(ramp(10), 1.5, 0, SplitMode::Prefix), std::invalid_argument);
  EXPECT_THROW(split(ramp(3), 0.1, 0, SplitMode::Prefix), std::invalid_argument);
}

TEST(Data, SyntheticIsEquispacedAndDeterministic) {
  const auto spec = KernelSpec::se(1.0, 20.0, 0.1);
  const Dataset d = synthetic(spec, 1000, {0.0, 999.0}, 7);
  EXPECT_EQ(d.size(), 1000);
  EXPECT_DOUBLE_EQ(d.x[1] - d.x[0], 1.0);
  EXPECT_EQ(d.y, synthetic(spec, 1000, {0.0, 999.0}, 7).y);
  const Dataset one = synthetic(spec, 1, {0.0, 1.0}, 1);
  EXPECT_EQ(one.size(), 1);
  EXPECT_TRUE(std::isfinite(one.y[0]));
  EXPECT_THROW(synthetic(spec, 0, {0.0, 1.0}, 1), std::invalid_argument);
}

TEST(Data, Centre) {
  Dataset d = ramp(5);
  EXPECT_DOUBLE_EQ(centre(d), 102.0);
  EXPECT_NEAR(d.y.sum(), 0.0, 1e-12);
}

TEST(Data, Rmse) {
  Eigen::VectorXd truth(4);
  truth << 1, -1, 2, -2;
  Predictive p;
  p.mean = truth;
  EXPECT_DOUBLE_EQ(rmse(p, truth, false), 0.0);
  p.mean = truth.array() + 0.3;
  EXPECT_NEAR(rmse(p, truth, false), 0.3, 1e-15);
  p.mean.setZero();
  EXPECT_NEAR(rmse(p, truth, true), 1.0, 1e-15);
  EXPECT_THROW(rmse(p, Eigen::VectorXd::Zero(3), false), std::invalid_argument);
}

}  // namespace
}  // namespace plgp

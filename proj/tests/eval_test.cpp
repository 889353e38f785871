#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "lstcn/error.hpp"
#include "lstcn/eval.hpp"
#include "support/synthetic.hpp"

namespace lstcn {
namespace {

using testing::random_matrix;

TEST(Mae, IdentityAndOffset) {
  std::mt19937_64 rng(1);
  const Matrix a = random_matrix(5, 4, rng);
  EXPECT_EQ(mae(a, a), 0.0);
  EXPECT_NEAR(mae((a.array() + 0.1).matrix(), a), 0.1, 1e-15);
}

TEST(Mae, MatchesLoopOracle) {
  std::mt19937_64 rng(2);
  const Matrix a = random_matrix(5, 4, rng);
  const Matrix b = random_matrix(5, 4, rng);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) sum += std::fabs(a(i, j) - b(i, j));
  EXPECT_NEAR(mae(a, b), sum / 20.0, 1e-12);
}

TEST(Mae, SymmetricAndTriangle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Matrix a = random_matrix(3, 3, rng), b = random_matrix(3, 3, rng), c = random_matrix(3, 3, rng);
    EXPECT_EQ(mae(a, b), mae(b, a));
    EXPECT_LE(mae(a, c), mae(a, b) + mae(b, c) + 1e-15);
  }
}

TEST(Mae, ShapeMismatch) {
  EXPECT_THROW(mae(Matrix::Zero(2, 2), Matrix::Zero(2, 3)), ShapeError);
  EXPECT_THROW(mae(Matrix(0, 2), Matrix(0, 2)), ValidationError);
}

TEST(Persistence, ConstantSeriesIsExact) {
  const WindowSet ws = make_windows(testing::constant_series(3, 40, 0.7), 4, 4, 1);
  EXPECT_EQ(mae(persistence_baseline(ws.inputs, 3, 4, 4), ws.targets), 0.0);
}

TEST(Persistence, LinearRampClosedForm) {
  // Forecast k steps ahead is off by k * slope, so the mean over k = 1..L is
  // slope * (L + 1) / 2 for every variable.
  const double slope = 0.01;
  for (const Eigen::Index l : {1, 3, 6}) {
    Matrix x(2, 50);
    for (Eigen::Index t = 0; t < 50; ++t) {
      x(0, t) = slope * static_cast<double>(t);
      x(1, t) = 0.5 + slope * static_cast<double>(t);
    }
    const WindowSet ws = make_windows(testing::make_series(x), l, l, 1);
    EXPECT_NEAR(mae(persistence_baseline(ws.inputs, 2, l, l), ws.targets),
                slope * static_cast<double>(l + 1) / 2.0, 1e-12);
  }
}

TEST(Persistence, RandomWalkIsFinite) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> step(0.0, 1.0);
  Matrix x(2, 300);
  x.col(0).setZero();
  for (Eigen::Index t = 1; t < 300; ++t)
    for (Eigen::Index v = 0; v < 2; ++v) x(v, t) = x(v, t - 1) + step(rng);
  const WindowSet ws = make_windows(testing::make_series(x), 5, 5, 1);
  EXPECT_TRUE(std::isfinite(mae(persistence_baseline(ws.inputs, 2, 5, 5), ws.targets)));
  EXPECT_THROW(persistence_baseline(ws.inputs, 3, 5, 5), ShapeError);
  EXPECT_THROW(persistence_baseline(ws.inputs, 2, 5, 4), ShapeError);
}

TEST(Benchmark, DeterministicErrors) {
  testing::SinusoidSpec spec;
  spec.length = 4000;
  const TimeSeries s = testing::sinusoid_series(spec);
  PipelineConfig cfg;
  const ForecastReport a = benchmark(s, cfg);
  const ForecastReport b = benchmark(s, cfg);
  EXPECT_EQ(a.train_mae, b.train_mae);
  EXPECT_EQ(a.test_mae, b.test_mae);
  EXPECT_EQ(a.baseline_test_mae, b.baseline_test_mae);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t k = 0; k < a.history.size(); ++k) EXPECT_EQ(a.history[k].train_mae, b.history[k].train_mae);
}

TEST(Benchmark, TrainSecondsIsSumOfPatchFits) {
  const ForecastReport r = benchmark(testing::sinusoid_series(), PipelineConfig{});
  double sum = 0.0;
  for (const PatchMetrics& p : r.history) sum += p.fit_seconds;
  EXPECT_NEAR(r.train_seconds, sum, 1e-9);
  EXPECT_GE(r.test_seconds, 0.0);
  EXPECT_EQ(r.test_mae_per_variable.cols(), 4);
}

TEST(Benchmark, LongerHorizonIsNotEasier) {
  const TimeSeries s = testing::sinusoid_series();
  PipelineConfig cfg;
  cfg.r = cfg.l = 6;
  const double short_horizon = benchmark(s, cfg).test_mae;
  cfg.r = cfg.l = 72;
  const double long_horizon = benchmark(s, cfg).test_mae;
  EXPECT_GE(long_horizon, short_horizon);
}

TEST(Report, JsonAndCsvShapes) {
  testing::SinusoidSpec spec;
  spec.length = 3000;
  const ForecastReport r = benchmark(testing::sinusoid_series(spec), PipelineConfig{});
  const auto doc = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(doc["test_mae"].get<double>(), r.test_mae);
  EXPECT_EQ(doc["history"].size(), r.history.size());
  EXPECT_EQ(doc["config"]["patch_size"], "1024");
  const auto count_commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(count_commas(csv_header()), count_commas(to_csv_row(r)));
}

}  // namespace
}  // namespace lstcn

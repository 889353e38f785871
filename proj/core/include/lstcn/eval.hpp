#pragma once

#include <string>
#include <vector>

#include "lstcn/config.hpp"
#include "lstcn/linalg.hpp"
#include "lstcn/model.hpp"

namespace lstcn {

// Mean of |pred - actual| over every entry.
double mae(const Eigen::Ref<const Matrix>& pred, const Eigen::Ref<const Matrix>& actual);

// Per-variable MAE of flattened (time-major) rows: entry v averages every
// column belonging to variable v.
RowVector mae_per_variable(const Eigen::Ref<const Matrix>& pred,
                           const Eigen::Ref<const Matrix>& actual,
                           Eigen::Index num_variables);

// No-change forecaster: repeats the last observed step of each input row
// `l` times. Requires N = m * r and r == l.
Matrix persistence_baseline(const Eigen::Ref<const Matrix>& p1, Eigen::Index m, Eigen::Index r,
                            Eigen::Index l);

struct ForecastReport {
  double train_mae = 0.0;
  double test_mae = 0.0;
  double baseline_test_mae = 0.0;
  double train_seconds = 0.0;   // sum of per-patch fit times
  double test_seconds = 0.0;    // one pass over the test inputs
  double warmup_seconds = 0.0;  // prior initialization, not part of train_seconds
  Eigen::Index train_windows = 0;
  Eigen::Index test_windows = 0;
  std::size_t patches = 0;
  PipelineConfig config;
  std::vector<std::string> variables;
  RowVector test_mae_per_variable;  // on the original (denormalized) scale
  std::vector<PatchMetrics> history;
};

// Pretty-printed JSON document. Times are rounded to milliseconds.
std::string to_json(const ForecastReport& report);

std::string csv_header();
// One flat row matching csv_header().
std::string to_csv_row(const ForecastReport& report);

// Runs the online pipeline and returns its report; the model is discarded.
ForecastReport benchmark(const TimeSeries& series, const PipelineConfig& cfg);

}  // namespace lstcn

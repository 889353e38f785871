#pragma once

#include <optional>

#include "lstcn/config.hpp"
#include "lstcn/data.hpp"
#include "lstcn/eval.hpp"
#include "lstcn/model.hpp"

namespace lstcn {

// Variable selection plus clean() on the configured grid.
TimeSeries prepare_series(const TimeSeries& raw, const PipelineConfig& cfg);

/// Normalized series split into training and held-out windows. The
/// normalization range comes from the training columns only and training and
/// test windows never straddle the split.
struct PreparedData {
  std::vector<std::string> variables;
  NormalizationParams normalization;
  Eigen::Index split_end = 0;
  TimeSeries normalized;
  WindowSet train;
  WindowSet test;
};

PreparedData prepare_data(const TimeSeries& series, const PipelineConfig& cfg);

// Warm-up patch: every training window of the moving-average-smoothed
// training split.
TimePatch warmup_patch(const PreparedData& data, const PipelineConfig& cfg);

struct OnlineRun {
  LstcnModel model;
  ForecastReport report;
  NormalizationParams normalization;
};

/// Initializes the priors, visits each training patch once in temporal order
/// and evaluates the final model on the held-out windows.
OnlineRun run_online(const TimeSeries& series, const PipelineConfig& cfg);

}  // namespace lstcn

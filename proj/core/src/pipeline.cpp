#include "lstcn/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "lstcn/error.hpp"

namespace lstcn {

TimeSeries prepare_series(const TimeSeries& raw, const PipelineConfig& cfg) {
  validate(cfg);
  const TimeSeries selected = cfg.variables.empty() ? raw : raw.select(cfg.variables);
  return clean(selected, cfg.interval);
}

PreparedData prepare_data(const TimeSeries& series, const PipelineConfig& cfg) {
  validate(cfg);
  validate_shape(series);
  require_finite(series.values, "time series values");

  PreparedData data;
  data.variables = series.variables;
  const Eigen::Index t = series.length();
  data.split_end = static_cast<Eigen::Index>(
      std::floor(cfg.train_fraction * static_cast<double>(t)));
  if (data.split_end < 1 || data.split_end >= t) {
    throw ValidationError("series of length " + std::to_string(t) +
                          " is too short to split into training and test parts");
  }
  data.normalization = normalize_fit(series, data.split_end);
  data.normalized = normalize_apply(series, data.normalization);
  data.train = make_windows(data.normalized.slice(0, data.split_end), cfg.r, cfg.l, cfg.stride);
  data.test = make_windows(data.normalized.slice(data.split_end, t), cfg.r, cfg.l, cfg.stride);
  if (data.train.size() < 1) {
    throw ValidationError("training split (" + std::to_string(data.split_end) +
                          " steps) yields no windows for r=" + std::to_string(cfg.r) +
                          ", l=" + std::to_string(cfg.l));
  }
  if (data.test.size() < 1) {
    throw ValidationError("test split (" + std::to_string(t - data.split_end) +
                          " steps) yields no windows for r=" + std::to_string(cfg.r) +
                          ", l=" + std::to_string(cfg.l));
  }
  return data;
}

TimePatch warmup_patch(const PreparedData& data, const PipelineConfig& cfg) {
  const TimeSeries smoothed =
      moving_average(data.normalized.slice(0, data.split_end), cfg.prior.window);
  return as_patch(make_windows(smoothed, cfg.r, cfg.l, cfg.stride));
}

OnlineRun run_online(const TimeSeries& series, const PipelineConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const PreparedData data = prepare_data(series, cfg);
  const Eigen::Index m = series.num_variables();

  const auto warm_start = Clock::now();
  Priors priors = cfg.prior.kind == PriorInitMode::Kind::kZeros
      ? init_priors(as_patch(data.train), cfg.prior, cfg.activation)
      : init_priors(warmup_patch(data, cfg), cfg.prior, cfg.activation);
  const auto warm_stop = Clock::now();

  LstcnModel model(std::move(priors), cfg.activation);
  double weighted_mae = 0.0;
  for (const TimePatch& patch : partition(data.train, cfg.patch_size)) {
    const PatchMetrics& metrics = model.train_on_patch(patch);
    weighted_mae += metrics.train_mae * static_cast<double>(metrics.rows);
  }

  ForecastReport report;
  report.config = cfg;
  report.variables = data.variables;
  report.train_windows = data.train.size();
  report.test_windows = data.test.size();
  report.patches = model.patches_seen();
  report.history = model.history();
  report.warmup_seconds = std::chrono::duration<double>(warm_stop - warm_start).count();
  for (const PatchMetrics& metrics : report.history) report.train_seconds += metrics.fit_seconds;
  report.train_mae = weighted_mae / static_cast<double>(data.train.size());

  const auto test_start = Clock::now();
  const Matrix forecast = model.predict(data.test.inputs);
  const auto test_stop = Clock::now();
  report.test_seconds = std::chrono::duration<double>(test_stop - test_start).count();
  report.test_mae = mae(forecast, data.test.targets);
  report.baseline_test_mae =
      mae(persistence_baseline(data.test.inputs, m, cfg.r, cfg.l), data.test.targets);

  // Per-variable errors in original units: the affine map scales each
  // variable's absolute error by its range.
  const RowVector per_var = mae_per_variable(forecast, data.test.targets, m);
  report.test_mae_per_variable = per_var.cwiseProduct(data.normalization.max - data.normalization.min);

  return OnlineRun{std::move(model), std::move(report), data.normalization};
}

}  // namespace lstcn

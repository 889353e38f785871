#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "lstcn/data.hpp"
#include "lstcn/error.hpp"
#include "lstcn/number_format.hpp"
#include "lstcn/pipeline.hpp"
#include "lstcn/snapshot.hpp"

namespace lstcn::cli {

PrepareSummary cmd_prepare(const std::filesystem::path& input, const PipelineConfig& cfg,
                           const std::filesystem::path& out_path) {
  validate(cfg);
  const TimeSeries series = prepare_series(load_csv(input), cfg);
  const Eigen::Index split_end = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::floor(cfg.train_fraction * static_cast<double>(series.length()))));
  const TimeSeries normalized = normalize_apply(series, normalize_fit(series, split_end));

  PreparedWindows prepared{series.variables, make_windows(normalized, cfg.r, cfg.l, cfg.stride)};
  write_prepared(out_path, prepared);

  PrepareSummary summary;
  summary.windows = prepared.windows.size();
  summary.patches = (summary.windows + cfg.patch_size - 1) / cfg.patch_size;
  summary.width = series.num_variables() * cfg.r;
  return summary;
}

ForecastReport cmd_train(const std::filesystem::path& input, const PipelineConfig& cfg,
                         const std::filesystem::path& model_out,
                         const std::filesystem::path& report_out) {
  const TimeSeries series = prepare_series(load_csv(input), cfg);
  OnlineRun run = run_online(series, cfg);
  save_snapshot(model_out, Snapshot{run.model, cfg, series.variables, run.normalization});
  if (!report_out.empty()) {
    std::ofstream out(report_out);
    if (!out) throw IoError("cannot write '" + report_out.string() + "'");
    out << to_json(run.report) << '\n';
  }
  return std::move(run.report);
}

void cmd_forecast(const std::filesystem::path& snapshot_path, const std::filesystem::path& recent,
                  std::ostream& out) {
  const Snapshot snap = load_snapshot(snapshot_path);
  const PipelineConfig& cfg = snap.config;
  const TimeSeries series = clean(load_csv(recent).select(snap.variables), cfg.interval);
  if (series.length() < cfg.r) {
    throw ValidationError("forecast needs at least R = " + std::to_string(cfg.r) +
                          " timestamps of recent data, got " + std::to_string(series.length()));
  }
  const TimeSeries normalized = normalize_apply(series, snap.normalization);
  const Eigen::Index m = normalized.num_variables();
  const Eigen::Index t = normalized.length();

  RowVector p1(m * cfg.r);
  for (Eigen::Index s = 0; s < cfg.r; ++s) {
    p1.segment(s * m, m) = normalized.values.col(t - cfg.r + s).transpose();
  }
  const Matrix forecast = snap.model.predict(p1);
  const Matrix values = normalize_invert(unflatten(forecast.row(0), m), snap.normalization);

  out << "timestamp";
  for (const auto& name : snap.variables) out << ',' << name;
  out << '\n';
  const Timestamp last = series.timestamps.back();
  for (Eigen::Index s = 0; s < values.cols(); ++s) {
    out << format_timestamp(last + (s + 1) * cfg.interval);
    for (Eigen::Index v = 0; v < m; ++v) out << ',' << format_double(values(v, s));
    out << '\n';
  }
}

std::vector<SweepRow> cmd_sweep(const std::filesystem::path& input, const PipelineConfig& cfg,
                                std::vector<Eigen::Index> ls, std::vector<Eigen::Index> ws) {
  if (ls.empty() || ws.empty()) throw ValidationError("sweep grid is empty");
  std::sort(ls.begin(), ls.end());
  std::sort(ws.begin(), ws.end());
  const TimeSeries series = prepare_series(load_csv(input), cfg);

  std::vector<SweepRow> rows;
  for (const Eigen::Index l : ls) {
    for (const Eigen::Index w : ws) {
      SweepRow row;
      row.l = l;
      row.w = w;
      PipelineConfig cell = cfg;
      cell.r = cell.l = l;
      cell.prior.window = w;
      try {
        row.report = benchmark(series, cell);
        row.ok = true;
      } catch (const Error& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "L,w,train_mae,test_mae,baseline_test_mae,train_seconds,test_seconds,status\n";
  for (const SweepRow& row : rows) {
    out << row.l << ',' << row.w << ',';
    if (row.ok) {
      const ForecastReport& r = row.report;
      out << format_double(r.train_mae) << ',' << format_double(r.test_mae) << ','
          << format_double(r.baseline_test_mae) << ','
          << format_double(std::round(r.train_seconds * 1000.0) / 1000.0) << ','
          << format_double(std::round(r.test_seconds * 1000.0) / 1000.0) << ",ok\n";
    } else {
      std::string reason = row.error;
      std::replace(reason.begin(), reason.end(), ',', ';');
      std::replace(reason.begin(), reason.end(), '\n', ' ');
      out << ",,,,,failed: " << reason << '\n';
    }
  }
}

namespace {

// Config flags shared by every subcommand. Values are kept as text and
// applied after the optional --config file so that flags win.
struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key=value config file")->check(CLI::ExistingFile);
    for (const char* key : {"r", "l", "stride", "patch-size", "lambda", "epsilon", "prior",
                            "smooth-w", "train-frac", "vars", "interval"}) {
      app->add_option_function<std::string>(
          std::string("--") + key, [this, key](const std::string& v) { values[key] = v; });
    }
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config_file.empty()) cfg = load_config(config_file, cfg);
    // A lone --l (or --r) sets both, since R = L is required.
    const bool has_r = values.count("r") > 0;
    const bool has_l = values.count("l") > 0;
    for (const auto& [key, value] : values) apply_setting(cfg, key, value);
    if (has_l && !has_r) cfg.r = cfg.l;
    if (has_r && !has_l) cfg.l = cfg.r;
    validate(cfg);
    return cfg;
  }
};

std::vector<Eigen::Index> parse_grid(const std::string& text) {
  std::vector<Eigen::Index> grid;
  for (const auto field : split(text, ',')) {
    if (trim(field).empty()) continue;
    const long long v = parse_integer(field);
    if (v < 1) throw ValidationError("grid values must be >= 1");
    grid.push_back(static_cast<Eigen::Index>(v));
  }
  return grid;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case Error::Category::kValidation: return kValidation;
    case Error::Category::kIo: return kIo;
    case Error::Category::kNumerical: return kNumerical;
  }
  return kValidation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online multivariate forecasting with long short-term cognitive networks"};
  app.require_subcommand(1);

  std::string input, output, report, model, recent, ls = "6,48,72", ws = "1,10";

  ConfigFlags prepare_flags;
  CLI::App* prepare = app.add_subcommand("prepare", "Clean, normalize and window a CSV series");
  prepare->add_option("input", input, "input CSV")->required();
  prepare->add_option("--out", output, "prepared-window file")->required();
  prepare_flags.attach(prepare);

  ConfigFlags train_flags;
  CLI::App* train = app.add_subcommand("train", "Train online and write a model snapshot");
  train->add_option("input", input, "input CSV")->required();
  train->add_option("--out", output, "model snapshot path")->required();
  train->add_option("--report", report, "JSON report path (default: <out>.report.json)");
  train_flags.attach(train);

  CLI::App* forecast = app.add_subcommand("forecast", "Forecast the next L steps");
  forecast->add_option("model", model, "model snapshot")->required();
  forecast->add_option("recent", recent, "recent CSV data")->required();
  forecast->add_option("--out", output, "forecast CSV (default: stdout)");

  ConfigFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "Benchmark a grid of horizons and smoothing windows");
  sweep->add_option("input", input, "input CSV")->required();
  sweep->add_option("--ls", ls, "comma-separated L values (R = L)");
  sweep->add_option("--ws", ws, "comma-separated smoothing windows");
  sweep->add_option("--out", output, "CSV table (default: stdout)");
  sweep_flags.attach(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (prepare->parsed()) {
      const PrepareSummary s = cmd_prepare(input, prepare_flags.resolve(), output);
      out << "Q=" << s.windows << " K=" << s.patches << " N=" << s.width << '\n';
    } else if (train->parsed()) {
      const std::string report_path = report.empty() ? output + ".report.json" : report;
      const ForecastReport r = cmd_train(input, train_flags.resolve(), output, report_path);
      out << csv_header() << '\n' << to_csv_row(r) << '\n';
    } else if (forecast->parsed()) {
      if (output.empty()) {
        cmd_forecast(model, recent, out);
      } else {
        std::ofstream file(output);
        if (!file) throw IoError("cannot write '" + output + "'");
        cmd_forecast(model, recent, file);
      }
    } else if (sweep->parsed()) {
      const auto rows = cmd_sweep(input, sweep_flags.resolve(), parse_grid(ls), parse_grid(ws));
      if (output.empty()) {
        write_sweep_csv(out, rows);
      } else {
        std::ofstream file(output);
        if (!file) throw IoError("cannot write '" + output + "'");
        write_sweep_csv(file, rows);
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace lstcn::cli

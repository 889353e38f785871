#include "lstcn/eval.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lstcn/error.hpp"
#include "lstcn/number_format.hpp"
#include "lstcn/pipeline.hpp"

namespace lstcn {

double mae(const Eigen::Ref<const Matrix>& pred, const Eigen::Ref<const Matrix>& actual) {
  if (pred.rows() != actual.rows() || pred.cols() != actual.cols()) {
    throw ShapeError("mae: prediction is " + std::to_string(pred.rows()) + "x" +
                     std::to_string(pred.cols()) + " but actual is " +
                     std::to_string(actual.rows()) + "x" + std::to_string(actual.cols()));
  }
  if (pred.size() == 0) throw ValidationError("mae: empty operands");
  return (pred - actual).cwiseAbs().mean();
}

RowVector mae_per_variable(const Eigen::Ref<const Matrix>& pred,
                           const Eigen::Ref<const Matrix>& actual,
                           Eigen::Index num_variables) {
  mae(pred, actual);  // shape check
  if (num_variables < 1 || pred.cols() % num_variables != 0) {
    throw ShapeError("width " + std::to_string(pred.cols()) + " is not a multiple of " +
                     std::to_string(num_variables));
  }
  RowVector sums = RowVector::Zero(num_variables);
  const Matrix abs_err = (pred - actual).cwiseAbs();
  const RowVector col_sums = abs_err.colwise().sum();
  for (Eigen::Index j = 0; j < col_sums.cols(); ++j) sums(j % num_variables) += col_sums(j);
  const double per_var_count =
      static_cast<double>(pred.rows()) * static_cast<double>(pred.cols() / num_variables);
  return sums / per_var_count;
}

Matrix persistence_baseline(const Eigen::Ref<const Matrix>& p1, Eigen::Index m, Eigen::Index r,
                            Eigen::Index l) {
  if (m < 1 || r < 1 || l < 1) throw ValidationError("persistence: m, r, l must be >= 1");
  if (r != l) throw ShapeError("persistence: r must equal l");
  if (p1.cols() != m * r) {
    throw ShapeError("persistence: inputs have " + std::to_string(p1.cols()) +
                     " columns, expected m*r = " + std::to_string(m * r));
  }
  Matrix out(p1.rows(), m * l);
  const auto last = p1.rightCols(m);
  for (Eigen::Index s = 0; s < l; ++s) out.middleCols(s * m, m) = last;
  return out;
}

namespace {

double round_ms(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

}  // namespace

std::string to_json(const ForecastReport& report) {
  nlohmann::ordered_json doc;
  doc["train_mae"] = report.train_mae;
  doc["test_mae"] = report.test_mae;
  doc["baseline_test_mae"] = report.baseline_test_mae;
  doc["train_seconds"] = round_ms(report.train_seconds);
  doc["test_seconds"] = round_ms(report.test_seconds);
  doc["warmup_seconds"] = round_ms(report.warmup_seconds);
  doc["train_windows"] = report.train_windows;
  doc["test_windows"] = report.test_windows;
  doc["patches"] = report.patches;
  doc["variables"] = report.variables;
  auto& per_var = doc["test_mae_per_variable"] = nlohmann::ordered_json::object();
  for (std::size_t v = 0; v < report.variables.size(); ++v) {
    if (static_cast<Eigen::Index>(v) < report.test_mae_per_variable.cols()) {
      per_var[report.variables[v]] = report.test_mae_per_variable(static_cast<Eigen::Index>(v));
    }
  }
  auto& config = doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : to_key_values(report.config)) config[key] = value;
  auto& history = doc["history"] = nlohmann::ordered_json::array();
  for (const PatchMetrics& p : report.history) {
    history.push_back({{"patch", p.patch_index},
                       {"rows", p.rows},
                       {"train_mae", p.train_mae},
                       {"fit_seconds", round_ms(p.fit_seconds)}});
  }
  return doc.dump(2);
}

std::string csv_header() {
  return "r,l,stride,patch_size,lambda,prior,smooth_w,train_mae,test_mae,baseline_test_mae,"
         "train_seconds,test_seconds,patches";
}

std::string to_csv_row(const ForecastReport& report) {
  const PipelineConfig& c = report.config;
  std::ostringstream os;
  os << c.r << ',' << c.l << ',' << c.stride << ',' << c.patch_size << ','
     << format_double(c.activation.lambda) << ','
     << (c.prior.kind == PriorInitMode::Kind::kZeros ? "zeros" : "warmup") << ','
     << c.prior.window << ',' << format_double(report.train_mae) << ','
     << format_double(report.test_mae) << ',' << format_double(report.baseline_test_mae) << ','
     << format_double(round_ms(report.train_seconds)) << ','
     << format_double(round_ms(report.test_seconds)) << ',' << report.patches;
  return os.str();
}

ForecastReport benchmark(const TimeSeries& series, const PipelineConfig& cfg) {
  return run_online(series, cfg).report;
}

}  // namespace lstcn

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lstcn/config.hpp"
#include "lstcn/eval.hpp"

namespace lstcn::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kIo = 3,
  kNumerical = 4,
};

struct PrepareSummary {
  Eigen::Index windows = 0;   // Q
  Eigen::Index patches = 0;   // K
  Eigen::Index width = 0;     // N
};

// Clean, normalize (range from the training split) and window the whole
// series, then write the prepared-window export.
PrepareSummary cmd_prepare(const std::filesystem::path& input, const PipelineConfig& cfg,
                           const std::filesystem::path& out_path);

// Runs the online pipeline, writes the model snapshot and a JSON report.
ForecastReport cmd_train(const std::filesystem::path& input, const PipelineConfig& cfg,
                         const std::filesystem::path& model_out,
                         const std::filesystem::path& report_out);

// Forecasts the next L steps after the last timestamp of `recent`, in
// original units. Writes `timestamp,<var1>,...,<varM>` rows.
void cmd_forecast(const std::filesystem::path& snapshot, const std::filesystem::path& recent,
                  std::ostream& out);

struct SweepRow {
  Eigen::Index l = 0;
  Eigen::Index w = 0;
  bool ok = false;
  std::string error;
  ForecastReport report;
};

// One benchmark per (L, w) cell with R = L; failed cells are reported, not fatal.
std::vector<SweepRow> cmd_sweep(const std::filesystem::path& input, const PipelineConfig& cfg,
                                std::vector<Eigen::Index> ls, std::vector<Eigen::Index> ws);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Whole command line, in-process. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lstcn::cli

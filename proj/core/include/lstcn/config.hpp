#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lstcn/data.hpp"
#include "lstcn/stcn.hpp"

namespace lstcn {

// How the priors of the first block are obtained.
struct PriorInitMode {
  enum class Kind { kZeros, kSmoothedWarmup };

  Kind kind = Kind::kSmoothedWarmup;
  Eigen::Index window = 10;  // moving-average width for kSmoothedWarmup

  static PriorInitMode zeros() { return {Kind::kZeros, 1}; }
  static PriorInitMode smoothed_warmup(Eigen::Index w) { return {Kind::kSmoothedWarmup, w}; }
};

struct PipelineConfig {
  Eigen::Index r = 6;
  Eigen::Index l = 6;
  Eigen::Index stride = 1;
  Eigen::Index patch_size = 1024;
  ActivationConfig activation;
  PriorInitMode prior;
  double train_fraction = 0.8;
  std::vector<std::string> variables;  // empty: every column of the input
  Timestamp interval = 600;             // sampling grid used by clean()
};

// Throws ValidationError on r != l, non-positive counts, train_fraction
// outside (0, 1) or an invalid activation config.
void validate(const PipelineConfig& cfg);

// Applies one `key=value` setting. Keys: r, l, stride, patch_size, lambda,
// epsilon, prior (zeros|warmup), smooth_w, train_frac, vars, interval.
// Dashes and underscores are interchangeable in keys.
void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value);

// Reads a flat key=value file; `#` starts a comment.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

std::map<std::string, std::string> to_key_values(const PipelineConfig& cfg);

}  // namespace lstcn

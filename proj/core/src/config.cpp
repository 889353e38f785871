#include "lstcn/config.hpp"

#include <algorithm>
#include <fstream>

#include "lstcn/error.hpp"
#include "lstcn/number_format.hpp"

namespace lstcn {

void validate(const PipelineConfig& cfg) {
  if (cfg.r < 1 || cfg.l < 1) throw ValidationError("r and l must be >= 1");
  if (cfg.r != cfg.l) {
    throw ValidationError("r must equal l (got r=" + std::to_string(cfg.r) +
                          ", l=" + std::to_string(cfg.l) + ")");
  }
  if (cfg.stride < 1) throw ValidationError("stride must be >= 1");
  if (cfg.patch_size < 1) throw ValidationError("patch size must be >= 1");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0, 1)");
  }
  if (cfg.prior.kind == PriorInitMode::Kind::kSmoothedWarmup && cfg.prior.window < 1) {
    throw ValidationError("smoothing window must be >= 1");
  }
  if (cfg.interval < 1) throw ValidationError("sampling interval must be >= 1 second");
  validate(cfg.activation);
}

namespace {

std::string normalize_key(std::string_view key) {
  std::string out(trim(key));
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

Eigen::Index positive_count(std::string_view key, std::string_view value) {
  const long long v = parse_integer(value);
  if (v < 1) throw ValidationError(std::string(key) + " must be >= 1");
  return static_cast<Eigen::Index>(v);
}

}  // namespace

void apply_setting(PipelineConfig& cfg, std::string_view raw_key, std::string_view raw_value) {
  const std::string key = normalize_key(raw_key);
  const std::string_view value = trim(raw_value);
  if (key == "r") {
    cfg.r = positive_count(key, value);
  } else if (key == "l") {
    cfg.l = positive_count(key, value);
  } else if (key == "stride") {
    cfg.stride = positive_count(key, value);
  } else if (key == "patch_size") {
    cfg.patch_size = positive_count(key, value);
  } else if (key == "lambda") {
    cfg.activation.lambda = parse_double(value);
  } else if (key == "epsilon") {
    cfg.activation.logit_epsilon = parse_double(value);
  } else if (key == "prior") {
    if (value == "zeros") {
      cfg.prior.kind = PriorInitMode::Kind::kZeros;
    } else if (value == "warmup") {
      cfg.prior.kind = PriorInitMode::Kind::kSmoothedWarmup;
    } else {
      throw ValidationError("prior must be 'zeros' or 'warmup', got '" + std::string(value) + "'");
    }
  } else if (key == "smooth_w") {
    cfg.prior.window = positive_count(key, value);
  } else if (key == "train_frac") {
    cfg.train_fraction = parse_double(value);
  } else if (key == "vars") {
    cfg.variables.clear();
    for (const auto name : split(value, ',')) {
      if (!trim(name).empty()) cfg.variables.emplace_back(trim(name));
    }
  } else if (key == "interval") {
    cfg.interval = positive_count(key, value);
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no);
    out[normalize_key(view.substr(0, eq))] = std::string(trim(view.substr(eq + 1)));
  }
  return out;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  for (const auto& [key, value] : read_key_values(path)) apply_setting(base, key, value);
  return base;
}

std::map<std::string, std::string> to_key_values(const PipelineConfig& cfg) {
  std::string vars;
  for (std::size_t i = 0; i < cfg.variables.size(); ++i) {
    if (i) vars += ',';
    vars += cfg.variables[i];
  }
  return {
      {"r", std::to_string(cfg.r)},
      {"l", std::to_string(cfg.l)},
      {"stride", std::to_string(cfg.stride)},
      {"patch_size", std::to_string(cfg.patch_size)},
      {"lambda", format_double(cfg.activation.lambda)},
      {"epsilon", format_double(cfg.activation.logit_epsilon)},
      {"prior", cfg.prior.kind == PriorInitMode::Kind::kZeros ? "zeros" : "warmup"},
      {"smooth_w", std::to_string(cfg.prior.window)},
      {"train_frac", format_double(cfg.train_fraction)},
      {"vars", vars},
      {"interval", std::to_string(cfg.interval)},
  };
}

}  // namespace lstcn

#include "lstcn/model.hpp"

#include <chrono>
#include <string>

#include "lstcn/error.hpp"
#include "lstcn/eval.hpp"

namespace lstcn {

Priors init_priors(const TimePatch& warmup, const PriorInitMode& mode, const ActivationConfig& cfg) {
  const Eigen::Index n = warmup.width();
  if (warmup.rows() < 1 || n < 1) throw ValidationError("warm-up patch is empty");
  if (warmup.p2.rows() != warmup.rows() || warmup.p2.cols() != n) {
    throw ShapeError("warm-up patch halves differ in shape");
  }
  if (mode.kind == PriorInitMode::Kind::kZeros) {
    return {Matrix::Zero(n, n), RowVector::Zero(n)};
  }
  if (mode.window < 1) throw ValidationError("smoothing window must be >= 1");
  OutputGateFit fit = fit_output_gate(warmup.p1, warmup.p2, cfg);
  return {std::move(fit.w2), std::move(fit.b2)};
}

Priors aggregate(const Eigen::Ref<const Matrix>& w2, const Eigen::Ref<const RowVector>& b2) {
  return {w2.array().tanh().matrix(), b2.array().tanh().matrix()};
}

LstcnModel::LstcnModel(Priors initial, ActivationConfig cfg)
    : cfg_(cfg), next_(std::move(initial)) {
  validate(cfg_);
  const Eigen::Index n = next_.w1.rows();
  if (n < 1 || next_.w1.cols() != n || next_.b1.cols() != n) {
    throw ShapeError("priors must be an NxN matrix and a 1xN row");
  }
  require_finite(next_.w1, "prior weights");
  require_finite(next_.b1, "prior bias");
}

LstcnModel LstcnModel::restore(StcnWeights live, ActivationConfig cfg,
                               std::vector<PatchMetrics> history) {
  validate(live);
  if (history.empty()) throw ValidationError("a restored model needs at least one fitted patch");
  LstcnModel model(aggregate(live.w2, live.b2), cfg);
  model.live_ = std::move(live);
  model.history_ = std::move(history);
  return model;
}

const StcnWeights& LstcnModel::live_block() const {
  if (!ready()) throw NotReadyError("model has not been trained on any patch");
  return live_;
}

const PatchMetrics& LstcnModel::train_on_patch(const TimePatch& patch) {
  const Eigen::Index n = width();
  if (patch.rows() < 1) throw ValidationError("cannot train on an empty patch");
  if (patch.width() != n || patch.p2.cols() != n || patch.p2.rows() != patch.rows()) {
    throw ShapeError("patch is " + std::to_string(patch.rows()) + "x" +
                     std::to_string(patch.width()) + " but the model width is " +
                     std::to_string(n));
  }

  const auto start = std::chrono::steady_clock::now();
  Matrix h = input_gate(patch.p1, next_.w1, next_.b1);
  OutputGateFit fit = fit_output_gate(h, patch.p2, cfg_);
  const auto stop = std::chrono::steady_clock::now();

  PatchMetrics metrics;
  metrics.patch_index = history_.size();
  metrics.rows = patch.rows();
  metrics.train_mae = mae(output_gate(h, fit.w2, fit.b2), patch.p2);
  metrics.fit_seconds = std::chrono::duration<double>(stop - start).count();

  Priors staged = aggregate(fit.w2, fit.b2);
  live_.w1 = std::move(next_.w1);
  live_.b1 = std::move(next_.b1);
  live_.w2 = std::move(fit.w2);
  live_.b2 = std::move(fit.b2);
  next_ = std::move(staged);
  history_.push_back(metrics);
  return history_.back();
}

Matrix LstcnModel::predict(const Eigen::Ref<const Matrix>& p1) const {
  const StcnWeights& block = live_block();
  if (p1.cols() != width()) {
    throw ShapeError("inputs have " + std::to_string(p1.cols()) +
                     " columns but the model width is " + std::to_string(width()));
  }
  return output_gate(input_gate(p1, block.w1, block.b1), block.w2, block.b2);
}

LstcnModel train_on_patch(LstcnModel model, const TimePatch& patch) {
  model.train_on_patch(patch);
  return model;
}

}  // namespace lstcn

#pragma once

#include <cstddef>
#include <vector>

#include "lstcn/config.hpp"
#include "lstcn/data.hpp"
#include "lstcn/stcn.hpp"

namespace lstcn {

// Prior knowledge handed to the input gate of a block.
struct Priors {
  Matrix w1;
  RowVector b1;
};

struct PatchMetrics {
  std::size_t patch_index = 0;
  Eigen::Index rows = 0;
  double train_mae = 0.0;
  double fit_seconds = 0.0;
};

/// Priors for the first block.
///
/// kZeros ignores the data and returns zero matrices of the patch width.
/// kSmoothedWarmup expects `warmup` to be built from the already smoothed
/// series; it fits one block with the inputs as temporal state (H = P1) and
/// returns that block's learned weights unchanged as the priors.
Priors init_priors(const TimePatch& warmup, const PriorInitMode& mode, const ActivationConfig& cfg);

// Elementwise tanh of learned weights, the priors of the following block.
Priors aggregate(const Eigen::Ref<const Matrix>& w2, const Eigen::Ref<const RowVector>& b2);

/// Chain of short-term blocks collapsed to its last element.
///
/// `live_block()` is the most recently fitted block together with the priors
/// it was fitted under; forecasts use exactly these four matrices.
/// `priors()` are the frozen priors the next patch will be fitted under,
/// i.e. aggregate() of the live block's learned weights.
///
/// Single writer: train_on_patch needs exclusive access, predict is const.
class LstcnModel {
 public:
  LstcnModel(Priors initial, ActivationConfig cfg);

  // Rebuilds a trained model from a stored live block. The next-block priors
  // are recomputed from it.
  static LstcnModel restore(StcnWeights live, ActivationConfig cfg,
                            std::vector<PatchMetrics> history);

  Eigen::Index width() const { return next_.w1.rows(); }
  std::size_t patches_seen() const { return history_.size(); }
  bool ready() const { return !history_.empty(); }

  const ActivationConfig& config() const { return cfg_; }
  const Priors& priors() const { return next_; }
  const StcnWeights& live_block() const;
  const std::vector<PatchMetrics>& history() const { return history_; }

  // Fits a new block on `patch` under the current priors, makes it the live
  // block and stages its aggregated weights as the next priors. Only the
  // given patch and the model state are read.
  const PatchMetrics& train_on_patch(const TimePatch& patch);

  // Forecast for C x N inputs; every entry lies in (0, 1).
  Matrix predict(const Eigen::Ref<const Matrix>& p1) const;

 private:
  ActivationConfig cfg_;
  Priors next_;
  StcnWeights live_;
  std::vector<PatchMetrics> history_;
};

// Value-semantics form of LstcnModel::train_on_patch.
LstcnModel train_on_patch(LstcnModel model, const TimePatch& patch);

}  // namespace lstcn

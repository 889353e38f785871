#pragma once

#include "lstcn/linalg.hpp"

namespace lstcn {

// Weights of one short-term block. w1/b1 are the frozen priors inherited from
// the previous block; w2/b2 are fitted on the block's own patch.
struct StcnWeights {
  Matrix w1;
  RowVector b1;
  Matrix w2;
  RowVector b2;

  Eigen::Index width() const { return w1.rows(); }
};

// Checks square w1/w2 of identical size, 1xN biases and finite entries.
void validate(const StcnWeights& weights);

struct ActivationConfig {
  // Targets are clamped to [eps, 1 - eps] before the inverse activation.
  double logit_epsilon = 1e-6;
  double lambda = 1e-2;
};

void validate(const ActivationConfig& cfg);

// Logistic function. Saturates to the nearest representable values strictly
// inside (0, 1) instead of rounding to 0 or 1.
double sigmoid(double x);

// ln(p / (1 - p)) after clamping p to [eps, 1 - eps].
double logit(double p, double eps);

Matrix sigmoid(const Eigen::Ref<const Matrix>& m);
Matrix logit(const Eigen::Ref<const Matrix>& m, double eps);

// H = sigmoid(P1 * W1 (+) B1)
Matrix input_gate(const Eigen::Ref<const Matrix>& p1,
                  const Eigen::Ref<const Matrix>& w1,
                  const Eigen::Ref<const RowVector>& b1);

// P2_hat = sigmoid(H * W2 (+) B2)
Matrix output_gate(const Eigen::Ref<const Matrix>& h,
                   const Eigen::Ref<const Matrix>& w2,
                   const Eigen::Ref<const RowVector>& b2);

// Per-column z-score statistics of a temporal state matrix.
struct ColumnScaling {
  RowVector mean;
  RowVector scale;  // standard deviation, or 1 for constant columns
  Eigen::Array<bool, 1, Eigen::Dynamic> constant;
};

inline constexpr double kMinColumnDeviation = 1e-12;

ColumnScaling fit_scaling(const Eigen::Ref<const Matrix>& h);

// Standardized design matrix (Z | 1). Constant columns are exactly zero.
Matrix design_matrix(const Eigen::Ref<const Matrix>& h, const ColumnScaling& scaling);

struct OutputGateFit {
  Matrix w2;
  RowVector b2;
};

/// Closed-form fit of the output gate.
///
/// Targets are mapped through the clamped logit, the columns of H are
/// z-scored, and the ridge system on (Z | 1) is solved with the diagonal
/// penalty. The standardized weights are then folded back so that
/// output_gate(h, w2, b2) evaluates the same affine map on the raw H:
///   w2[j, :] = w2_std[j, :] / sigma_j
///   b2       = b2_std - sum_j mu_j * w2[j, :]
OutputGateFit fit_output_gate(const Eigen::Ref<const Matrix>& h,
                              const Eigen::Ref<const Matrix>& p2,
                              const ActivationConfig& cfg);

}  // namespace lstcn

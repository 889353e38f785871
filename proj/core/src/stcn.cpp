#include "lstcn/stcn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lstcn/error.hpp"

namespace lstcn {
namespace {

// Largest double below 1 and smallest positive normal double.
constexpr double kSigmoidUpper = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kSigmoidLower = std::numeric_limits<double>::min();

void require_square(const Eigen::Ref<const Matrix>& w, Eigen::Index n, const char* name) {
  if (w.rows() != n || w.cols() != n) {
    throw ShapeError(std::string(name) + " must be " + std::to_string(n) + "x" +
                     std::to_string(n) + ", got " + std::to_string(w.rows()) + "x" +
                     std::to_string(w.cols()));
  }
}

Matrix gate(const Eigen::Ref<const Matrix>& x,
            const Eigen::Ref<const Matrix>& w,
            const Eigen::Ref<const RowVector>& b) {
  Matrix z = broadcast_add_row(matmul(x, w), b);
  return sigmoid(z);
}

}  // namespace

void validate(const StcnWeights& weights) {
  const Eigen::Index n = weights.w1.rows();
  if (n < 1) throw ShapeError("StcnWeights: empty prior matrix");
  require_square(weights.w1, n, "w1");
  require_square(weights.w2, n, "w2");
  if (weights.b1.cols() != n || weights.b2.cols() != n) {
    throw ShapeError("StcnWeights: bias rows must have " + std::to_string(n) + " columns");
  }
  require_finite(weights.w1, "w1");
  require_finite(weights.b1, "b1");
  require_finite(weights.w2, "w2");
  require_finite(weights.b2, "b2");
}

void validate(const ActivationConfig& cfg) {
  if (!(cfg.logit_epsilon > 0.0 && cfg.logit_epsilon < 0.5)) {
    throw ValidationError("logit_epsilon must lie in (0, 0.5)");
  }
  if (!std::isfinite(cfg.lambda) || cfg.lambda < 0.0) {
    throw ValidationError("lambda must be finite and >= 0");
  }
}

double sigmoid(double x) {
  double y;
  if (x >= 0.0) {
    y = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    y = e / (1.0 + e);
  }
  return std::clamp(y, kSigmoidLower, kSigmoidUpper);
}

double logit(double p, double eps) {
  const double q = std::clamp(p, eps, 1.0 - eps);
  return std::log(q) - std::log1p(-q);
}

Matrix sigmoid(const Eigen::Ref<const Matrix>& m) {
  return m.unaryExpr([](double x) { return sigmoid(x); });
}

Matrix logit(const Eigen::Ref<const Matrix>& m, double eps) {
  return m.unaryExpr([eps](double p) { return logit(p, eps); });
}

Matrix input_gate(const Eigen::Ref<const Matrix>& p1,
                  const Eigen::Ref<const Matrix>& w1,
                  const Eigen::Ref<const RowVector>& b1) {
  require_square(w1, p1.cols(), "w1");
  return gate(p1, w1, b1);
}

Matrix output_gate(const Eigen::Ref<const Matrix>& h,
                   const Eigen::Ref<const Matrix>& w2,
                   const Eigen::Ref<const RowVector>& b2) {
  require_square(w2, h.cols(), "w2");
  return gate(h, w2, b2);
}

ColumnScaling fit_scaling(const Eigen::Ref<const Matrix>& h) {
  const Eigen::Index c = h.rows();
  const Eigen::Index n = h.cols();
  ColumnScaling s;
  s.mean = h.colwise().mean();
  s.scale.resize(n);
  s.constant.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto col = h.col(j);
    // A column whose entries are all equal is constant regardless of the
    // rounding in its mean.
    const bool all_equal = (col.array() == col(0)).all();
    const double dev = all_equal
        ? 0.0
        : std::sqrt((col.array() - s.mean(j)).square().sum() / static_cast<double>(c));
    s.constant(j) = all_equal || dev < kMinColumnDeviation;
    s.scale(j) = s.constant(j) ? 1.0 : dev;
  }
  return s;
}

Matrix design_matrix(const Eigen::Ref<const Matrix>& h, const ColumnScaling& scaling) {
  const Eigen::Index n = h.cols();
  Matrix phi(h.rows(), n + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (scaling.constant(j)) {
      phi.col(j).setZero();
    } else {
      phi.col(j) = (h.col(j).array() - scaling.mean(j)) / scaling.scale(j);
    }
  }
  phi.col(n).setOnes();
  return phi;
}

OutputGateFit fit_output_gate(const Eigen::Ref<const Matrix>& h,
                              const Eigen::Ref<const Matrix>& p2,
                              const ActivationConfig& cfg) {
  validate(cfg);
  if (h.rows() < 1) throw ValidationError("fit_output_gate: empty patch");
  if (h.rows() != p2.rows() || h.cols() != p2.cols()) {
    throw ShapeError("fit_output_gate: temporal state is " + std::to_string(h.rows()) + "x" +
                     std::to_string(h.cols()) + " but targets are " +
                     std::to_string(p2.rows()) + "x" + std::to_string(p2.cols()));
  }
  require_finite(h, "temporal state");
  require_finite(p2, "patch targets");

  const Eigen::Index n = h.cols();
  const ColumnScaling scaling = fit_scaling(h);
  const Matrix phi = design_matrix(h, scaling);
  const Matrix targets = logit(p2, cfg.logit_epsilon);

  // Rows 0..n-1 hold standardized weights, row n the standardized bias.
  const Matrix stacked = ridge_solve(phi, targets, cfg.lambda);

  OutputGateFit fit;
  fit.w2.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    fit.w2.row(j) = scaling.constant(j) ? RowVector::Zero(n)
                                        : RowVector(stacked.row(j) / scaling.scale(j));
  }
  fit.b2 = stacked.row(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!scaling.constant(j)) fit.b2 -= scaling.mean(j) * fit.w2.row(j);
  }
  return fit;
}

}  // namespace lstcn

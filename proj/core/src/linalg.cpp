#include "lstcn/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>

#include "lstcn/error.hpp"

namespace lstcn {
namespace {

std::string shape_of(const Eigen::Ref<const Matrix>& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

// Smallest squared Cholesky pivot relative to the largest Gram diagonal entry
// below which the factorization is treated as singular.
constexpr double kPivotTolerance = 1e-14;

}  // namespace

bool all_finite(const Eigen::Ref<const Matrix>& m) {
  return m.allFinite();
}

void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw ValidationError(std::string(what) + " is empty (" + shape_of(m) + ")");
  }
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + " contains non-finite entries");
  }
}

Matrix matmul(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: left operand is " + shape_of(a) +
                     " but right operand is " + shape_of(b));
  }
  return a * b;
}

Matrix broadcast_add_row(const Eigen::Ref<const Matrix>& m,
                         const Eigen::Ref<const RowVector>& v) {
  if (v.cols() != m.cols()) {
    throw ShapeError("broadcast_add_row: matrix is " + shape_of(m) +
                     " but row vector has " + std::to_string(v.cols()) + " columns");
  }
  Matrix out = m;
  out.rowwise() += v;
  return out;
}

RowVector ridge_penalty_diagonal(const Eigen::Ref<const Matrix>& phi) {
  RowVector omega = phi.colwise().squaredNorm();
  for (Eigen::Index j = 0; j < omega.cols(); ++j) {
    if (omega(j) == 0.0) omega(j) = kDeadColumnPenalty;
  }
  return omega;
}

Matrix ridge_solve(const Eigen::Ref<const Matrix>& phi,
                   const Eigen::Ref<const Matrix>& y,
                   double lambda) {
  if (phi.rows() != y.rows()) {
    throw ShapeError("ridge_solve: design matrix is " + shape_of(phi) +
                     " but targets are " + shape_of(y));
  }
  require_finite(phi, "ridge_solve design matrix");
  require_finite(y, "ridge_solve targets");
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw ValidationError("ridge_solve: lambda must be finite and >= 0");
  }

  const Eigen::Index n = phi.cols();
  // Column-major Gram matrix; only the lower triangle is accumulated.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(phi.transpose());

  if (lambda > 0.0) {
    gram.diagonal() += lambda * ridge_penalty_diagonal(phi).transpose();
  }
  const double max_diag = gram.diagonal().maxCoeff();

  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(gram);
  bool singular = llt.info() != Eigen::Success || max_diag <= 0.0;
  if (!singular) {
    const auto pivots = llt.matrixLLT().diagonal();
    const double min_pivot_sq = pivots.cwiseAbs2().minCoeff();
    singular = !(min_pivot_sq > kPivotTolerance * max_diag);
  }
  if (singular) {
    throw SingularError(lambda == 0.0
        ? "ridge_solve: normal equations are singular; use lambda > 0"
        : "ridge_solve: regularized normal equations are singular");
  }

  const Eigen::MatrixXd rhs = phi.transpose() * y;
  Matrix solution = llt.solve(rhs);
  if (!solution.allFinite()) {
    throw SingularError("ridge_solve: solution is not finite");
  }
  return solution;
}

}  // namespace lstcn

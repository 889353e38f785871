#pragma once

#include <string_view>

#include <Eigen/Core>

namespace lstcn {

// Dense 64-bit matrix, row-major. Shape and finiteness are checked at the
// operation boundaries below rather than on every construction, so that an
// empty window set can still be represented as a 0-row matrix.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic, Eigen::RowMajor>;

// Diagonal entries of Omega that are exactly zero are replaced by this factor
// so that a dead column still receives a (tiny) ridge penalty.
inline constexpr double kDeadColumnPenalty = 1e-8;

bool all_finite(const Eigen::Ref<const Matrix>& m);

// Throws ValidationError naming `what` if `m` is empty or holds NaN/Inf.
void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what);

Matrix matmul(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);

// The row-broadcast addition: result(i, j) = m(i, j) + v(j).
Matrix broadcast_add_row(const Eigen::Ref<const Matrix>& m, const Eigen::Ref<const RowVector>& v);

/// Regularized least squares with a column-scaled penalty.
///
/// Returns B = (Phi^T Phi + lambda * Omega)^-1 Phi^T Y, where Omega is the
/// diagonal of Phi^T Phi. The system is solved through a Cholesky
/// factorization of the regularized Gram matrix; the inverse is never formed.
///
/// Throws ShapeError on row mismatch, ValidationError on non-finite input or
/// negative lambda, and SingularError when the system cannot be factored
/// (typically lambda == 0 with rank-deficient phi).
Matrix ridge_solve(const Eigen::Ref<const Matrix>& phi,
                   const Eigen::Ref<const Matrix>& y,
                   double lambda);

// Diagonal used as Omega by ridge_solve, with dead entries already replaced.
RowVector ridge_penalty_diagonal(const Eigen::Ref<const Matrix>& phi);

}  // namespace lstcn

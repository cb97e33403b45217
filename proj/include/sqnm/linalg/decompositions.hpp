#pragma once

#include "sqnm/linalg/dense_matrix.hpp"
#include "sqnm/linalg/svd.hpp"

namespace sqnm {

struct QrFactors {
    DenseMatrix q; // m x n, orthonormal columns
    DenseMatrix r; // n x n upper triangular, diagonal >= 0
};

/// Householder QR of a matrix with rows >= cols.
QrFactors householder_qr(const DenseMatrix& a);

/// Solves A x = b for symmetric positive definite A (Cholesky). `b` may hold
/// several right-hand sides as columns. Throws NumericalFailure when A is not PD.
DenseMatrix cholesky_solve(const DenseMatrix& a, const DenseMatrix& b);

/// Moore-Penrose pseudo-inverse; singular values at or below rcond * sigma_max are
/// dropped.
DenseMatrix pseudo_inverse(const DenseMatrix& a, double rcond = kRankTolerance);

/// Minimum-norm least-squares solution of A X = B.
DenseMatrix least_squares(const DenseMatrix& a, const DenseMatrix& b, double rcond = kRankTolerance);

/// Largest singular value.
double spectral_norm(const DenseMatrix& a);

} // namespace sqnm

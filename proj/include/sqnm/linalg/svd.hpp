#pragma once

#include "sqnm/linalg/dense_matrix.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sqnm {

/// Singular values at or below kRankTolerance * sigma_max count as zero for every
/// rank decision (numerical_rank, factor constructors, norm evaluation). They are
/// still reported in SpectralDecomposition::sigma.
inline constexpr double kRankTolerance = 1e-12;

/// Thin SVD triple: source == left * diag(sigma) * right^T.
struct SpectralDecomposition {
    DenseMatrix left;          // m x k, orthonormal columns
    std::vector<double> sigma; // k values, nonincreasing, >= 0
    DenseMatrix right;         // n x k, orthonormal columns

    std::size_t rank() const noexcept;
    DenseMatrix reconstruct() const;
};

/// One-sided Jacobi SVD. With `k` set, only the leading k triplets are returned.
///
/// Left singular vectors belonging to numerically-zero singular values are
/// replaced by an orthonormal completion so `left` always has orthonormal columns,
/// including for the zero matrix. Singular vector signs are unconstrained.
SpectralDecomposition thin_svd(const DenseMatrix& x, std::optional<std::size_t> k = std::nullopt);

/// Singular values only (same algorithm, skips nothing but the completion step).
std::vector<double> singular_values(const DenseMatrix& x);

/// Number of entries above kRankTolerance * max(sigma).
std::size_t numerical_rank(std::span<const double> sigma) noexcept;

/// Elementwise sigma_i^alpha with 0^alpha = 0.
std::vector<double> diag_power(std::span<const double> sigma, double alpha);

} // namespace sqnm

#pragma once

#include "sqnm/linalg/dense_matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <random>

namespace sqnm {

using Rng = std::mt19937_64;

/// Independent stream seed from (seed, stream) via splitmix64. Used wherever a
/// routine needs several reproducible sub-streams, e.g. one per trial or restart.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// i.i.d. N(0, 1) entries, drawn in row-major logical order.
DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);
DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar-distributed orthogonal n x n matrix: Q from the QR factorization of a
/// Gaussian matrix, with the column signs fixed so that R has a nonnegative diagonal.
DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed);
DenseMatrix random_orthogonal(std::size_t n, Rng& rng);

} // namespace sqnm

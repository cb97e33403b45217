#include "sqnm/linalg/random.hpp"

#include "sqnm/error.hpp"
#include "sqnm/linalg/decompositions.hpp"

namespace sqnm {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    if (rows == 0 || cols == 0) fail(ErrorKind::Dimension, "gaussian_matrix: dimensions must be positive");
    std::normal_distribution<double> normal(0.0, 1.0);
    DenseMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = normal(rng);
    return out;
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    return gaussian_matrix(rows, cols, rng);
}

DenseMatrix random_orthogonal(std::size_t n, Rng& rng) {
    if (n == 0) fail(ErrorKind::Dimension, "random_orthogonal: n must be positive");
    // householder_qr already normalizes R to a nonnegative diagonal, which is the
    // sign convention that makes Q Haar distributed.
    return householder_qr(gaussian_matrix(n, n, rng)).q;
}

DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return random_orthogonal(n, rng);
}

} // namespace sqnm

#pragma once

#include "sqnm/completion.hpp"
#include "sqnm/linalg/dense_matrix.hpp"

#include <cstddef>
#include <cstdint>

namespace sqnm {

/// G1 G2^T with G1 (m x r) and G2 (n x r) standard Gaussian. Requires
/// 1 <= r <= min(m, n).
DenseMatrix gen_lowrank(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed);

/// Each entry observed independently with probability `fraction` in (0, 1].
/// A draw with no observed entry is discarded and redrawn from the same stream.
ObservationMask gen_mask(std::size_t m, std::size_t n, double fraction, std::uint64_t seed);

/// Noiseless synthetic completion instance.
struct SyntheticInstance {
    DenseMatrix truth;
    ObservationMask mask;
    DenseMatrix observed; // P_Omega(truth)
};

/// Truth and mask use independent streams derived from `seed`.
SyntheticInstance gen_instance(std::size_t m, std::size_t n, std::size_t r, double fraction, std::uint64_t seed);

/// lambda_rel * ||P_Omega(D)||_F
double relative_lambda(const DenseMatrix& observed, const ObservationMask& mask, double lambda_rel);

} // namespace sqnm

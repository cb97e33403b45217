#pragma once

#include "sqnm/linalg/dense_matrix.hpp"

#include <span>

namespace sqnm {

/// Schatten exponent p > 0. p >= 1 gives a norm, 0 < p < 1 a quasi-norm.
class SchattenExponent {
public:
    /// Throws InvalidExponent unless p is finite and positive.
    explicit SchattenExponent(double p);

    double value() const noexcept { return p_; }
    bool is_norm() const noexcept { return p_ >= 1.0; }
    bool is_quasi_norm() const noexcept { return p_ < 1.0; }

private:
    double p_;
};

/// sum_i sigma_i^p with 0^p = 0. Input must be finite and nonnegative.
double trace_power(std::span<const double> sigma, SchattenExponent p);

/// ||X||_{S_p}^p. Singular values at or below kRankTolerance * sigma_max are
/// treated as exact zeros, so rounding noise in a rank-deficient X does not
/// leak into quasi-norms (where tiny^p is not tiny).
double schatten_power(const DenseMatrix& x, SchattenExponent p);

/// ||X||_{S_p} = (sum_i sigma_i(X)^p)^(1/p).
double schatten_norm(const DenseMatrix& x, SchattenExponent p);

/// Same as schatten_power/schatten_norm from precomputed singular values.
double schatten_power_from_values(std::span<const double> sigma, SchattenExponent p);
double schatten_norm_from_values(std::span<const double> sigma, SchattenExponent p);

/// Tr^p(A diag(sigma) A^T) - Tr^p(diag(sigma)), where Tr^p sums p-th powers of the
/// diagonal. Nonnegative for orthogonal A and 0 < p <= 1.
///
/// A must be square, sized like sigma, with max|A A^T - I| and max|A^T A - I| at
/// most 1e-10 (InvalidInput otherwise); p outside (0, 1] is InvalidExponent.
double rotation_trace_gap(std::span<const double> sigma, const DenseMatrix& a, SchattenExponent p);

} // namespace sqnm

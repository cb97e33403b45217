#pragma once

#include "sqnm/linalg/dense_matrix.hpp"
#include "sqnm/linalg/svd.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sqnm {

/// Harmonic identity tolerance on |sum_i 1/p_i - 1/p| relative to 1/p.
inline constexpr double kSplitTolerance = 1e-12;

/// Target exponent p in (0, 1] and factor exponents p_1..p_M (M >= 2) with
/// sum_i 1/p_i = 1/p.
class ExponentSplit {
public:
    /// Throws InvalidExponent (p outside (0,1] or a part <= 0), InvalidInput
    /// (fewer than two parts) or SplitMismatch (harmonic identity violated).
    static ExponentSplit make(double p, std::vector<double> parts);

    double p() const noexcept { return p_; }
    std::span<const double> parts() const noexcept { return parts_; }
    std::size_t arity() const noexcept { return parts_.size(); }
    double part(std::size_t i) const { return parts_.at(i); }
    bool all_convex() const noexcept;

private:
    ExponentSplit(double p, std::vector<double> parts) : p_(p), parts_(std::move(parts)) {}

    double p_;
    std::vector<double> parts_;
};

/// M equal parts of M*p. Without `m`, M = floor(1/p) + 1, which makes every part
/// exceed 1 (all factor norms convex).
ExponentSplit make_split(double p, std::vector<double> parts);
ExponentSplit equal_split(double p, std::optional<std::size_t> m = std::nullopt);

/// Ordered factors U_1..U_M whose chain reconstructs X:
///
///   M = 2:  X = U_1 U_2^T                 (U_1: m x d, U_2: n x d)
///   M = 3:  X = U_1 U_2 U_3^T             (U_2: d x d)
///   M > 3:  X = U_1 U_2 ... U_{M-1} U_M^T (middle factors d x d)
///
/// The last factor is always stored n x d, like V in X = U V^T.
struct FactorSet {
    std::vector<DenseMatrix> factors;
    std::size_t inner_dim = 0;

    std::size_t arity() const noexcept { return factors.size(); }
    std::size_t rows() const;
    std::size_t cols() const;
    /// Throws Dimension when the chain shapes are inconsistent.
    void validate() const;
    DenseMatrix product() const;
};

/// Leading product U_1 ... U_{M-1} (m x d).
DenseMatrix leading_product(const FactorSet& fs);

/// Closed-form minimizer of prod_i ||U_i||_{S_{p_i}} subject to the chain
/// reconstructing X: with X = L diag(sigma) R^T over its numerical rank r,
///
///   U_1 = L diag(sigma^{p/p_1}),  U_i = diag(sigma^{p/p_i}),  U_M = R diag(sigma^{p/p_M}),
///
/// zero-padded to inner dimension d. Every factor then satisfies
/// ||U_i||_{S_{p_i}}^{p_i} = ||X||_{S_p}^p. Throws InfeasibleDimension when d < r.
FactorSet optimal_factors(const DenseMatrix& x, const ExponentSplit& split, std::size_t d);
/// Same construction from an existing decomposition, using its leading
/// min(d, rank) triplets. Lets callers build a rank-d approximation's factors
/// without re-decomposing (spectral initialization of the solvers).
FactorSet spectral_factors(const SpectralDecomposition& svd, const ExponentSplit& split, std::size_t d);

FactorSet optimal_factors_two(const DenseMatrix& x, const ExponentSplit& split, std::size_t d);
FactorSet optimal_factors_three(const DenseMatrix& x, const ExponentSplit& split, std::size_t d);
FactorSet optimal_factors_m(const DenseMatrix& x, const ExponentSplit& split, std::size_t d);

/// ||U_i||_{S_{p_i}}^{p_i} for each factor.
std::vector<double> factor_penalties(const FactorSet& fs, const ExponentSplit& split);

/// prod_i ||U_i||_{S_{p_i}}
double product_objective(const FactorSet& fs, const ExponentSplit& split);

/// (p * sum_i ||U_i||_{S_{p_i}}^{p_i} / p_i)^(1/p). Dominates product_objective
/// (weighted AM-GM), with equality when all factor penalties agree.
double weighted_sum_objective(const FactorSet& fs, const ExponentSplit& split);

} // namespace sqnm

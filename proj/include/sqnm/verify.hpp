#pragma once

#include "sqnm/factorize.hpp"
#include "sqnm/linalg/dense_matrix.hpp"
#include "sqnm/linalg/random.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace sqnm {

/// Outcome of a numerical certification run against ||X||_{S_p}.
struct VerificationReport {
    double target_norm = 0.0;
    double best_found = 0.0;
    double gap = 0.0; // best_found - target_norm
    std::size_t trials = 0;
    bool converged = false;

    std::size_t discarded = 0;       // infeasible random draws (bound_audit)
    double min_young_gap = 0.0;      // min over accepted draws of weighted_sum - product
    std::size_t outer_iterations = 0; // continuation stages of the best restart (local_min_search)
};

/// Allowed undercut of the target: 1e-8 * max(1, target).
double verification_tolerance(double target_norm) noexcept;

/// One random factorization that reconstructs X. U_1 = L_r G with L_r the
/// leading left singular vectors and G Gaussian (so range(U_1) = range(X)), the
/// middle factors are Gaussian, and the last factor is the least-squares solution
/// plus a random component in the null space of the leading product.
FactorSet sample_feasible_factorization(const DenseMatrix& x, const ExponentSplit& split, std::size_t d,
                                        Rng& rng);

struct AuditOptions {
    bool include_constructor = true;
    double feasibility_tolerance = 1e-8; // relative Frobenius residual
};

/// Minimum of product_objective over n_trials random feasible factorizations
/// (trial t draws from derive_seed(seed, t), so trial sets nest as n_trials grows),
/// plus the closed-form optimum when include_constructor is set.
VerificationReport bound_audit(const DenseMatrix& x, const ExponentSplit& split, std::size_t d,
                               std::size_t n_trials, std::uint64_t seed, const AuditOptions& options = {});

struct SearchOptions {
    double mu_start = 0.1;   // relative to sigma_r(X)^(2-p), sigma_r the smallest nonzero singular value
    double mu_decay = 0.5;
    double mu_floor = 1e-9;
    double stage_tolerance = 1e-8;
    double stop_tolerance = 1e-10; // objective change between stages
    double attain_tolerance = 1e-3;
    /// Start restart 0 from these factors instead of a random draw; the
    /// continuation then begins at mu_floor.
    std::optional<FactorSet> initial;
};

/// Penalty-continuation descent toward min prod_i ||U_i||_{S_{p_i}} s.t. chain = X.
///
/// Each stage runs block proximal gradient (refine_factors, full mask) on
///   mu * p * sum_i ||U_i||_{S_{p_i}}^{p_i} / p_i + 1/2 ||X - prod U_i||_F^2,
/// then re-solves the last factor by least squares to restore X = prod U_i and
/// scores the result with product_objective. mu shrinks geometrically until the
/// score stops moving or mu reaches its floor. Restarts run concurrently and are
/// merged by minimum. Splits with any p_i < 1 are UnsupportedSplit.
VerificationReport local_min_search(const DenseMatrix& x, const ExponentSplit& split, std::size_t d,
                                    std::size_t restarts, std::size_t max_iters, std::uint64_t seed,
                                    const SearchOptions& options = {});

// Inequality gaps; each is >= 0 up to rounding.

/// g(sum t_i x_i) - sum t_i g(x_i) for g(x) = x^p, 0 < p <= 1, weights summing to 1.
double jensen_gap(std::span<const double> weights, std::span<const double> values, double p);
/// ||x||_a ||y||_b - sum |x_i y_i| with 1/a + 1/b = 1, a > 1.
double holder_gap(std::span<const double> x, std::span<const double> y, double a);
/// u^a/a + v^b/b - u v with 1/a + 1/b = 1, a > 1, u, v >= 0.
double young_gap(double u, double v, double a);

} // namespace sqnm

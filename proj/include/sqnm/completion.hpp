#pragma once

#include "sqnm/factorize.hpp"
#include "sqnm/linalg/dense_matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sqnm {

/// Observed-entry indicator, column-major like DenseMatrix.
class ObservationMask {
public:
    ObservationMask() = default;
    ObservationMask(std::size_t rows, std::size_t cols, bool fill = false);

    static ObservationMask full(std::size_t rows, std::size_t cols) { return {rows, cols, true}; }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t observed_count() const noexcept;

    bool operator()(std::size_t i, std::size_t j) const noexcept { return bits_[j * rows_ + i] != 0; }
    void set(std::size_t i, std::size_t j, bool value) noexcept { bits_[j * rows_ + i] = value ? 1 : 0; }

    const std::uint8_t* data() const noexcept { return bits_.data(); }

    bool operator==(const ObservationMask&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// P_Omega(X): observed entries kept, the rest zeroed.
DenseMatrix project_observed(const DenseMatrix& x, const ObservationMask& mask);

struct PenaltySpec {
    ExponentSplit split;
    std::size_t inner_dim = 1;
};

/// min  lambda * ||X||_{S_p}^p + 1/2 ||P_Omega(X - D)||_F^2, with the Schatten term
/// replaced by its factored surrogate  p * sum_i ||U_i||_{S_{p_i}}^{p_i} / p_i.
struct CompletionProblem {
    DenseMatrix observed; // D; only entries on the mask are read
    ObservationMask mask;
    double lambda = 0.0;
    PenaltySpec penalty;

    /// InvalidProblem: shape mismatch, empty mask, non-finite observed entry,
    /// negative lambda, zero inner dimension.
    void validate() const;
};

struct SolveOptions {
    std::size_t max_iters = 2000;
    double tolerance = 1e-8; // relative objective change between outer iterations
};

struct SolveReport {
    FactorSet factors;
    std::vector<double> objective_trace;
    double final_objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;

    DenseMatrix estimate() const { return factors.product(); }
};

/// lambda * p * sum_i ||U_i||_{S_{p_i}}^{p_i} / p_i + 1/2 ||P_Omega(prod U_i - D)||_F^2
double objective_eval(const CompletionProblem& prob, const FactorSet& fs);

/// Block proximal gradient over the factors.
///
/// Each sweep updates U_1..U_M in order: a gradient step on the masked residual
/// followed by schatten_prox with exponent p_i and weight t*lambda*p/p_i. The step
/// t starts at twice the last accepted value for that block and is halved until
/// the standard sufficient-decrease test holds, never dropping below 1/L with
/// L = ||left||_2^2 ||right||_2^2. Each block first tries the step from the
/// extrapolated point U_i + w (U_i - U_i_prev) with Nesterov weights w; when that
/// fails to lower the objective, the block's momentum resets and the plain step
/// from U_i is taken instead. The objective is recorded after every sweep,
/// so the trace is nonincreasing. Initialization: the optimal factors of the
/// rank-d truncation of (mn/|Omega|) P_Omega(D).
SolveReport factored_complete(const CompletionProblem& prob, const SolveOptions& options = {});

/// The same block proximal-gradient iteration started from caller-supplied
/// factors (shapes must match the problem and the penalty split).
SolveReport refine_factors(const CompletionProblem& prob, FactorSet start, const SolveOptions& options = {});

struct IrlsOptions {
    std::size_t max_iters = 2000;
    double tolerance = 1e-8;
    double eps_decay = 0.9;
    double eps_floor = 1e-10;
};

/// Full-matrix IRLS baseline for lambda * ||X||_{S_p}^p + 1/2 ||P_Omega(X - D)||_F^2.
///
/// Minimizes the smoothed surrogate lambda * tr((X^T X + eps I)^{p/2}) + loss by
/// majorize-minimize: each step solves, row by row,
///   (diag(mask_i) + lambda p W) x_i = mask_i .* d_i,  W = (X_k^T X_k + eps I)^{p/2 - 1},
/// then shrinks eps geometrically. The trace holds the smoothed objective at each
/// iterate and is nonincreasing. Stops once eps reached its floor and the relative
/// change fell below tolerance. The report carries the rank-d truncation of the
/// final iterate as a balanced two-factor set.
SolveReport irls_baseline(const CompletionProblem& prob, double p, double eps0,
                          const IrlsOptions& options = {});

} // namespace sqnm

#include "sqnm/completion.hpp"

#include "sqnm/error.hpp"
#include "sqnm/linalg/decompositions.hpp"
#include "sqnm/linalg/svd.hpp"
#include "sqnm/prox.hpp"
#include "sqnm/schatten.hpp"
#include "sqnm/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace sqnm {

ObservationMask::ObservationMask(std::size_t rows, std::size_t cols, bool fill)
    : rows_(rows), cols_(cols), bits_(rows * cols, fill ? 1 : 0) {}

std::size_t ObservationMask::observed_count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

DenseMatrix project_observed(const DenseMatrix& x, const ObservationMask& mask) {
    if (x.rows() != mask.rows() || x.cols() != mask.cols()) {
        fail(ErrorKind::Dimension, "project_observed: mask shape mismatch");
    }
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i)
            if (mask(i, j)) out(i, j) = x(i, j);
    return out;
}

void CompletionProblem::validate() const {
    if (observed.empty()) fail(ErrorKind::InvalidProblem, "completion: observed matrix is empty");
    if (observed.rows() != mask.rows() || observed.cols() != mask.cols()) {
        fail(ErrorKind::InvalidProblem, "completion: mask shape does not match observed matrix");
    }
    if (mask.observed_count() == 0) fail(ErrorKind::InvalidProblem, "completion: mask has no observed entries");
    for (std::size_t j = 0; j < observed.cols(); ++j)
        for (std::size_t i = 0; i < observed.rows(); ++i)
            if (mask(i, j) && !std::isfinite(observed(i, j))) {
                fail(ErrorKind::InvalidProblem, "completion: non-finite observed entry at (" +
                                                    std::to_string(i) + ", " + std::to_string(j) + ")");
            }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail(ErrorKind::InvalidProblem, "completion: lambda must be >= 0");
    if (penalty.inner_dim == 0) fail(ErrorKind::InvalidProblem, "completion: inner dimension must be positive");
}

namespace {

// 1/2 ||P_Omega(X - D)||_F^2; `residual` receives P_Omega(X - D).
double masked_loss(const DenseMatrix& x, const CompletionProblem& prob, DenseMatrix& residual) {
    residual = DenseMatrix(x.rows(), x.cols());
    const double ss = simd::kernels().masked_diff(x.values().data(), prob.observed.values().data(),
                                                  prob.mask.data(), residual.values().data(), x.size());
    return 0.5 * ss;
}

double masked_loss(const DenseMatrix& x, const CompletionProblem& prob) {
    DenseMatrix scratch;
    return masked_loss(x, prob, scratch);
}

double penalty_value(const std::vector<double>& penalties, const ExponentSplit& split, double lambda) {
    double sum = 0.0;
    for (std::size_t i = 0; i < penalties.size(); ++i) sum += penalties[i] / split.part(i);
    return lambda * split.p() * sum;
}

void check_factor_shapes(const CompletionProblem& prob, const FactorSet& fs) {
    fs.validate();
    if (fs.rows() != prob.observed.rows() || fs.cols() != prob.observed.cols()) {
        fail(ErrorKind::Dimension, "objective: factor chain does not match the observed matrix shape");
    }
    if (fs.arity() != prob.penalty.split.arity()) {
        fail(ErrorKind::InvalidInput, "objective: factor count does not match the penalty split");
    }
}

// The block being updated, written so that  X = left * core * right  with either
// side optional. For the last factor the core is U_M^T.
struct BlockView {
    std::optional<DenseMatrix> left;
    std::optional<DenseMatrix> right;
    bool transposed = false;
};

BlockView block_view(const FactorSet& fs, std::size_t i) {
    const std::size_t count = fs.arity();
    BlockView view;
    view.transposed = i + 1 == count;
    if (i > 0) {
        DenseMatrix acc = fs.factors[0];
        for (std::size_t j = 1; j < i; ++j) acc = multiply(acc, fs.factors[j]);
        view.left = std::move(acc);
    }
    if (i + 1 < count) {
        DenseMatrix acc = fs.factors.back().transpose();
        for (std::size_t j = count - 1; j-- > i + 1;) acc = multiply(fs.factors[j], acc);
        view.right = std::move(acc);
    }
    return view;
}

DenseMatrix apply_view(const BlockView& view, const DenseMatrix& core) {
    DenseMatrix x = view.left ? multiply(*view.left, core) : core;
    return view.right ? multiply(x, *view.right) : x;
}

double frob_dot(const DenseMatrix& a, const DenseMatrix& b) {
    return simd::dot(a.values(), b.values());
}

} // namespace

double objective_eval(const CompletionProblem& prob, const FactorSet& fs) {
    check_factor_shapes(prob, fs);
    const auto penalties = factor_penalties(fs, prob.penalty.split);
    return penalty_value(penalties, prob.penalty.split, prob.lambda) + masked_loss(fs.product(), prob);
}

SolveReport factored_complete(const CompletionProblem& prob, const SolveOptions& options) {
    prob.validate();
    const std::size_t d = prob.penalty.inner_dim;
    const std::size_t m = prob.observed.rows();
    const std::size_t n = prob.observed.cols();

    DenseMatrix init = project_observed(prob.observed, prob.mask);
    init *= static_cast<double>(m * n) / static_cast<double>(prob.mask.observed_count());
    return refine_factors(prob, spectral_factors(thin_svd(init, std::min({d, m, n})), prob.penalty.split, d),
                          options);
}

SolveReport refine_factors(const CompletionProblem& prob, FactorSet fs, const SolveOptions& options) {
    prob.validate();
    check_factor_shapes(prob, fs);
    if (fs.inner_dim != prob.penalty.inner_dim) {
        fail(ErrorKind::Dimension, "refine_factors: factor inner dimension differs from the penalty's");
    }
    const ExponentSplit& split = prob.penalty.split;
    const std::size_t count = split.arity();

    std::vector<double> penalties = factor_penalties(fs, split);
    double objective = penalty_value(penalties, split, prob.lambda) + masked_loss(fs.product(), prob);

    SolveReport report;
    report.objective_trace.push_back(objective);
    std::vector<double> steps(count, 0.0);
    // Per-block extrapolation state: previous core and the Nesterov sequence.
    std::vector<std::optional<DenseMatrix>> previous(count);
    std::vector<double> momentum(count, 1.0);

    for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
        const double before = objective;
        for (std::size_t i = 0; i < count; ++i) {
            const BlockView view = block_view(fs, i);
            const DenseMatrix core = view.transposed ? fs.factors[i].transpose() : fs.factors[i];

            const double lip_left = view.left ? spectral_norm(*view.left) : 1.0;
            const double lip_right = view.right ? spectral_norm(*view.right) : 1.0;
            const double lipschitz = lip_left * lip_left * lip_right * lip_right;
            if (lipschitz == 0.0) continue; // the other factors vanish: this block cannot move the loss
            const double safe_step = 1.0 / lipschitz;

            const double weight = prob.lambda * split.p() / split.part(i);
            const double core_loss = masked_loss(apply_view(view, core), prob);
            const double others = objective - core_loss - weight * penalties[i];

            struct Step {
                DenseMatrix point;
                double penalty = 0.0;
                double objective = 0.0;
                double t = 0.0;
                bool sufficient = false;
            };
            // Backtracked proximal-gradient step taken from `base`.
            auto step_from = [&](const DenseMatrix& base) {
                DenseMatrix residual;
                const double loss = masked_loss(apply_view(view, base), prob, residual);
                DenseMatrix grad = view.right ? multiply_nt(residual, *view.right) : residual;
                if (view.left) grad = multiply_tn(*view.left, grad);
                double t = steps[i] > 0.0 ? std::max(2.0 * steps[i], safe_step) : safe_step;
                for (;;) {
                    DenseMatrix trial = base;
                    simd::axpy(-t, grad.values(), trial.values());
                    Step s;
                    if (weight > 0.0) {
                        SpectralProx prox = schatten_prox_spectrum(trial, t * weight, split.part(i));
                        s.point = std::move(prox.value);
                        s.penalty = schatten_power_from_values(prox.sigma, SchattenExponent(split.part(i)));
                    } else {
                        s.penalty = schatten_power(trial, SchattenExponent(split.part(i)));
                        s.point = std::move(trial);
                    }
                    const double cand_loss = masked_loss(apply_view(view, s.point), prob);
                    const DenseMatrix delta = s.point - base;
                    const double model = loss + frob_dot(grad, delta) + frob_dot(delta, delta) / (2.0 * t);
                    s.objective = others + cand_loss + weight * s.penalty;
                    s.t = t;
                    s.sufficient = cand_loss <= model + 1e-15 * std::max(1.0, loss);
                    if (s.sufficient || t <= safe_step) return s;
                    t = std::max(0.5 * t, safe_step);
                }
            };

            std::optional<Step> accepted;
            if (previous[i]) {
                const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum[i] * momentum[i]));
                const double omega = (momentum[i] - 1.0) / next;
                DenseMatrix extrapolated = core;
                if (omega > 0.0) {
                    extrapolated += omega * (core - *previous[i]);
                }
                Step s = step_from(extrapolated);
                if (s.objective <= objective) {
                    accepted = std::move(s);
                    momentum[i] = next;
                } else {
                    momentum[i] = 1.0;
                }
            }
            if (!accepted) {
                Step s = step_from(core);
                if (!s.sufficient && s.objective > objective + 1e-12 * std::max(1.0, std::abs(objective))) {
                    report.objective_trace.push_back(s.objective);
                    throw NumericalFailure("factored_complete: objective increased after backtracking",
                                           report.objective_trace);
                }
                accepted = std::move(s);
            }
            steps[i] = accepted->t;
            if (accepted->objective <= objective) {
                previous[i] = core;
                fs.factors[i] = view.transposed ? accepted->point.transpose() : std::move(accepted->point);
                penalties[i] = accepted->penalty;
                objective = accepted->objective;
            }
        }
        report.objective_trace.push_back(objective);
        report.iterations = iter + 1;
        const double change = std::abs(before - objective) / std::max(std::abs(before), std::numeric_limits<double>::min());
        if (change < options.tolerance || objective == 0.0) {
            report.converged = true;
            break;
        }
    }

    report.final_objective = objective;
    report.factors = std::move(fs);
    return report;
}

SolveReport irls_baseline(const CompletionProblem& prob, double p, double eps0, const IrlsOptions& options) {
    prob.validate();
    if (!(prob.lambda > 0.0)) fail(ErrorKind::InvalidProblem, "irls_baseline: lambda must be > 0");
    if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::InvalidExponent, "irls_baseline: p must lie in (0, 1]");
    if (!(eps0 > 0.0) || !std::isfinite(eps0)) fail(ErrorKind::InvalidInput, "irls_baseline: eps0 must be > 0");

    const std::size_t m = prob.observed.rows();
    const std::size_t n = prob.observed.cols();
    const double half_p = 0.5 * p;

    auto smoothed = [&](const SpectralDecomposition& svd, double eps) {
        double total = static_cast<double>(n - svd.sigma.size()) * std::pow(eps, half_p);
        for (double s : svd.sigma) total += std::pow(s * s + eps, half_p);
        return total;
    };

    DenseMatrix x = project_observed(prob.observed, prob.mask);
    double eps = eps0;
    SpectralDecomposition svd = thin_svd(x);
    double objective = prob.lambda * smoothed(svd, eps) + masked_loss(x, prob);

    SolveReport report;
    report.objective_trace.push_back(objective);

    for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
        // W = eps^(p/2-1) I + R diag((s^2+eps)^(p/2-1) - eps^(p/2-1)) R^T
        const double base = std::pow(eps, half_p - 1.0);
        std::vector<double> adjust(svd.sigma.size());
        for (std::size_t k = 0; k < adjust.size(); ++k)
            adjust[k] = std::pow(svd.sigma[k] * svd.sigma[k] + eps, half_p - 1.0) - base;
        DenseMatrix weight = multiply_nt(scale_cols(svd.right, adjust), svd.right);
        for (std::size_t k = 0; k < n; ++k) weight(k, k) += base;
        weight *= prob.lambda * p;

        DenseMatrix next(m, n);
        DenseMatrix system(n, n);
        DenseMatrix rhs(n, 1);
        for (std::size_t i = 0; i < m; ++i) {
            system = weight;
            bool any = false;
            for (std::size_t j = 0; j < n; ++j) {
                const bool seen = prob.mask(i, j);
                rhs(j, 0) = seen ? prob.observed(i, j) : 0.0;
                if (seen) {
                    system(j, j) += 1.0;
                    any = true;
                }
            }
            if (!any) continue;
            const DenseMatrix row = cholesky_solve(system, rhs);
            for (std::size_t j = 0; j < n; ++j) next(i, j) = row(j, 0);
        }

        x = std::move(next);
        eps = std::max(eps * options.eps_decay, options.eps_floor);
        svd = thin_svd(x);
        const double before = objective;
        objective = prob.lambda * smoothed(svd, eps) + masked_loss(x, prob);
        report.objective_trace.push_back(objective);
        report.iterations = iter + 1;

        const double change = std::abs(before - objective) / std::max(std::abs(before), std::numeric_limits<double>::min());
        if (eps <= options.eps_floor && change < options.tolerance) {
            report.converged = true;
            break;
        }
    }

    const std::size_t d = std::min({prob.penalty.inner_dim, m, n});
    const SpectralDecomposition top = thin_svd(x, d);
    const std::vector<double> root = diag_power(top.sigma, 0.5);
    report.factors.inner_dim = prob.penalty.inner_dim;
    report.factors.factors = {scale_cols(top.left, root).pad_cols(prob.penalty.inner_dim),
                              scale_cols(top.right, root).pad_cols(prob.penalty.inner_dim)};
    report.final_objective = objective;
    return report;
}

} // namespace sqnm

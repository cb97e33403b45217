#include "sqnm/verify.hpp"

#include "sqnm/completion.hpp"
#include "sqnm/error.hpp"
#include "sqnm/linalg/decompositions.hpp"
#include "sqnm/linalg/svd.hpp"
#include "sqnm/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace sqnm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_feasible_dimension(std::size_t rank, std::size_t d, const char* who) {
    if (d == 0 || d < rank) {
        fail(ErrorKind::InfeasibleDimension, std::string(who) + ": inner dimension " + std::to_string(d) +
                                                 " is below the numerical rank " + std::to_string(rank));
    }
}

// Re-solve the last factor so the chain reproduces X as closely as the leading
// product allows.
FactorSet with_least_squares_tail(FactorSet fs, const DenseMatrix& x) {
    fs.factors.back() = least_squares(leading_product(fs), x).transpose();
    return fs;
}

double feasibility_residual(const FactorSet& fs, const DenseMatrix& x) {
    const double scale = std::max(x.frobenius_norm(), std::numeric_limits<double>::min());
    return (fs.product() - x).frobenius_norm() / scale;
}

} // namespace

double verification_tolerance(double target_norm) noexcept {
    return 1e-8 * std::max(1.0, target_norm);
}

FactorSet sample_feasible_factorization(const DenseMatrix& x, const ExponentSplit& split, std::size_t d,
                                        Rng& rng) {
    const SpectralDecomposition svd = thin_svd(x);
    const std::size_t r = svd.rank();
    require_feasible_dimension(r, d, "sample_feasible_factorization");
    const std::size_t count = split.arity();

    FactorSet fs;
    fs.inner_dim = d;
    fs.factors.reserve(count);
    fs.factors.push_back(r > 0 ? multiply(svd.left.left_cols(r), gaussian_matrix(r, d, rng))
                               : gaussian_matrix(x.rows(), d, rng));
    for (std::size_t i = 1; i + 1 < count; ++i) fs.factors.push_back(gaussian_matrix(d, d, rng));
    fs.factors.push_back(DenseMatrix(x.cols(), d));

    const DenseMatrix lead = leading_product(fs);
    const DenseMatrix pinv = pseudo_inverse(lead);
    // tail^T = P^+ X + (I - P^+ P) G
    DenseMatrix tail_t = multiply(pinv, x);
    DenseMatrix null_proj = DenseMatrix::identity(d) - multiply(pinv, lead);
    tail_t += multiply(null_proj, gaussian_matrix(d, x.cols(), rng));
    fs.factors.back() = tail_t.transpose();
    return fs;
}

VerificationReport bound_audit(const DenseMatrix& x, const ExponentSplit& split, std::size_t d,
                               std::size_t n_trials, std::uint64_t seed, const AuditOptions& options) {
    require_finite(x, "bound_audit");
    const auto sigma = singular_values(x);
    require_feasible_dimension(numerical_rank(sigma), d, "bound_audit");

    VerificationReport report;
    report.target_norm = schatten_norm_from_values(sigma, SchattenExponent(split.p()));
    report.best_found = kInf;
    report.min_young_gap = kInf;
    if (options.include_constructor) {
        report.best_found = product_objective(optimal_factors(x, split, d), split);
    }

    for (std::size_t t = 0; t < n_trials; ++t) {
        Rng rng(derive_seed(seed, t));
        const FactorSet fs = sample_feasible_factorization(x, split, d, rng);
        if (feasibility_residual(fs, x) > options.feasibility_tolerance) {
            ++report.discarded;
            continue;
        }
        ++report.trials;
        const double product = product_objective(fs, split);
        report.best_found = std::min(report.best_found, product);
        report.min_young_gap = std::min(report.min_young_gap, weighted_sum_objective(fs, split) - product);
    }
    if (report.trials == 0) report.min_young_gap = 0.0;

    report.gap = report.best_found - report.target_norm;
    report.converged = std::isfinite(report.best_found) && report.gap >= -verification_tolerance(report.target_norm);
    return report;
}

namespace {

struct RestartResult {
    double best = kInf;
    std::size_t stages = 0;
};

FactorSet random_start(const DenseMatrix& x, std::size_t count, std::size_t d, Rng& rng) {
    FactorSet fs;
    fs.inner_dim = d;
    fs.factors.push_back(gaussian_matrix(x.rows(), d, rng));
    for (std::size_t i = 1; i + 1 < count; ++i) fs.factors.push_back(gaussian_matrix(d, d, rng));
    fs.factors.push_back(gaussian_matrix(x.cols(), d, rng));
    const double ratio = x.frobenius_norm() / std::max(fs.product().frobenius_norm(), 1e-300);
    const double per_factor = std::pow(ratio, 1.0 / static_cast<double>(count));
    for (auto& f : fs.factors) f *= per_factor;
    return fs;
}

RestartResult run_restart(const DenseMatrix& x, const ExponentSplit& split, std::size_t d,
                          std::size_t max_iters, FactorSet start, bool warm, double sigma_min,
                          const SearchOptions& options) {
    const double mu_scale = std::pow(sigma_min, 2.0 - split.p());
    CompletionProblem stage{x, ObservationMask::full(x.rows(), x.cols()), 0.0, PenaltySpec{split, d}};
    const SolveOptions stage_options{max_iters, options.stage_tolerance};

    auto score = [&](const FactorSet& fs) {
        const FactorSet feasible = with_least_squares_tail(fs, x);
        if (feasibility_residual(feasible, x) > 1e-8) return kInf;
        return product_objective(feasible, split);
    };

    RestartResult result;
    double previous = warm ? score(start) : kInf;
    result.best = previous;
    double mu = warm ? options.mu_floor : options.mu_start;
    FactorSet current = std::move(start);

    for (;;) {
        stage.lambda = mu * mu_scale;
        current = refine_factors(stage, std::move(current), stage_options).factors;
        const double value = score(current);
        ++result.stages;
        result.best = std::min(result.best, value);
        const bool settled = std::isfinite(value) && std::isfinite(previous) &&
                             std::abs(value - previous) < options.stop_tolerance * std::max(1.0, value);
        if (settled || mu <= options.mu_floor) break;
        previous = value;
        mu = std::max(mu * options.mu_decay, options.mu_floor);
    }
    return result;
}

} // namespace

VerificationReport local_min_search(const DenseMatrix& x, const ExponentSplit& split, std::size_t d,
                                    std::size_t restarts, std::size_t max_iters, std::uint64_t seed,
                                    const SearchOptions& options) {
    if (!split.all_convex()) {
        fail(ErrorKind::UnsupportedSplit, "local_min_search: every factor exponent must be >= 1; use bound_audit");
    }
    require_finite(x, "local_min_search");
    const auto sigma = singular_values(x);
    require_feasible_dimension(numerical_rank(sigma), d, "local_min_search");

    VerificationReport report;
    report.target_norm = schatten_norm_from_values(sigma, SchattenExponent(split.p()));
    report.trials = restarts;
    if (report.target_norm == 0.0) {
        report.best_found = 0.0;
        report.converged = true;
        return report;
    }

    // Scaling by the smallest nonzero singular value keeps the first stage's
    // shrinkage below every sigma_i, so no direction of X is zeroed in all factors
    // at once (such points are stationary and the descent cannot leave them).
    const double sigma_min = sigma[numerical_rank(sigma) - 1];

    std::vector<std::future<RestartResult>> jobs;
    jobs.reserve(restarts);
    for (std::size_t r = 0; r < restarts; ++r) {
        const bool warm = r == 0 && options.initial.has_value();
        FactorSet start;
        if (warm) {
            start = *options.initial;
        } else {
            Rng rng(derive_seed(seed, r));
            start = random_start(x, split.arity(), d, rng);
        }
        jobs.push_back(std::async(std::launch::async, run_restart, std::cref(x), std::cref(split), d, max_iters,
                                  std::move(start), warm, sigma_min, std::cref(options)));
    }

    report.best_found = kInf;
    for (auto& job : jobs) {
        const RestartResult r = job.get();
        if (r.best < report.best_found) {
            report.best_found = r.best;
            report.outer_iterations = r.stages;
        }
    }
    report.gap = report.best_found - report.target_norm;
    report.converged = report.best_found <= report.target_norm * (1.0 + options.attain_tolerance);
    return report;
}

double jensen_gap(std::span<const double> weights, std::span<const double> values, double p) {
    if (weights.size() != values.size()) fail(ErrorKind::Dimension, "jensen_gap: length mismatch");
    if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::InvalidExponent, "jensen_gap: p must lie in (0, 1]");
    double mean = 0.0;
    double mean_of_powers = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (weights[i] < 0.0 || values[i] < 0.0) fail(ErrorKind::InvalidInput, "jensen_gap: negative input");
        mean += weights[i] * values[i];
        mean_of_powers += weights[i] * std::pow(values[i], p);
    }
    return std::pow(mean, p) - mean_of_powers;
}

double holder_gap(std::span<const double> x, std::span<const double> y, double a) {
    if (x.size() != y.size()) fail(ErrorKind::Dimension, "holder_gap: length mismatch");
    if (!(a > 1.0)) fail(ErrorKind::InvalidExponent, "holder_gap: exponent must exceed 1");
    const double b = a / (a - 1.0);
    double sx = 0.0, sy = 0.0, inner = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += std::pow(std::abs(x[i]), a);
        sy += std::pow(std::abs(y[i]), b);
        inner += std::abs(x[i] * y[i]);
    }
    return std::pow(sx, 1.0 / a) * std::pow(sy, 1.0 / b) - inner;
}

double young_gap(double u, double v, double a) {
    if (!(a > 1.0)) fail(ErrorKind::InvalidExponent, "young_gap: exponent must exceed 1");
    if (u < 0.0 || v < 0.0) fail(ErrorKind::InvalidInput, "young_gap: arguments must be nonnegative");
    const double b = a / (a - 1.0);
    return std::pow(u, a) / a + std::pow(v, b) / b - u * v;
}

} // namespace sqnm

#include "sqnm/factorize.hpp"

#include "sqnm/error.hpp"
#include "sqnm/linalg/svd.hpp"
#include "sqnm/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sqnm {

ExponentSplit ExponentSplit::make(double p, std::vector<double> parts) {
    if (!(p > 0.0 && p <= 1.0) || !std::isfinite(p)) {
        fail(ErrorKind::InvalidExponent, "split: target exponent p must lie in (0, 1], got " + std::to_string(p));
    }
    if (parts.size() < 2) fail(ErrorKind::InvalidInput, "split: need at least two factor exponents");
    double harmonic = 0.0;
    for (double pi : parts) {
        if (!(pi > 0.0) || !std::isfinite(pi)) {
            fail(ErrorKind::InvalidExponent, "split: factor exponents must be > 0, got " + std::to_string(pi));
        }
        harmonic += 1.0 / pi;
    }
    if (std::abs(harmonic - 1.0 / p) > kSplitTolerance * (1.0 / p)) {
        fail(ErrorKind::SplitMismatch, "split: sum of 1/p_i is " + std::to_string(harmonic) +
                                           " but 1/p is " + std::to_string(1.0 / p));
    }
    return ExponentSplit(p, std::move(parts));
}

bool ExponentSplit::all_convex() const noexcept {
    for (double pi : parts_)
        if (pi < 1.0) return false;
    return true;
}

ExponentSplit make_split(double p, std::vector<double> parts) {
    return ExponentSplit::make(p, std::move(parts));
}

ExponentSplit equal_split(double p, std::optional<std::size_t> m) {
    if (!(p > 0.0 && p <= 1.0) || !std::isfinite(p)) {
        fail(ErrorKind::InvalidExponent, "equal_split: p must lie in (0, 1]");
    }
    // 1/p is usually an intended integer or rational; nudge before flooring so
    // p = 1/3 yields floor(3) rather than floor(2.9999999999999996).
    const std::size_t count =
        m.value_or(static_cast<std::size_t>(std::floor((1.0 / p) * (1.0 + 1e-12))) + 1);
    if (count < 2) fail(ErrorKind::InvalidInput, "equal_split: need M >= 2");
    return ExponentSplit::make(p, std::vector<double>(count, static_cast<double>(count) * p));
}

std::size_t FactorSet::rows() const { return factors.empty() ? 0 : factors.front().rows(); }
std::size_t FactorSet::cols() const { return factors.empty() ? 0 : factors.back().rows(); }

void FactorSet::validate() const {
    if (factors.size() < 2) fail(ErrorKind::Dimension, "FactorSet: need at least two factors");
    const std::size_t d = inner_dim;
    if (d == 0) fail(ErrorKind::Dimension, "FactorSet: inner dimension must be positive");
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const DenseMatrix& f = factors[i];
        const bool ok = (i == 0 || i + 1 == factors.size()) ? f.cols() == d && f.rows() > 0
                                                             : f.rows() == d && f.cols() == d;
        if (!ok) {
            fail(ErrorKind::Dimension, "FactorSet: factor " + std::to_string(i + 1) + " has shape " +
                                           std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                                           ", inconsistent with inner dimension " + std::to_string(d));
        }
    }
}

DenseMatrix leading_product(const FactorSet& fs) {
    fs.validate();
    DenseMatrix acc = fs.factors.front();
    for (std::size_t i = 1; i + 1 < fs.factors.size(); ++i) acc = multiply(acc, fs.factors[i]);
    return acc;
}

DenseMatrix FactorSet::product() const {
    return multiply_nt(leading_product(*this), factors.back());
}

FactorSet spectral_factors(const SpectralDecomposition& svd, const ExponentSplit& split, std::size_t d) {
    if (d == 0) fail(ErrorKind::Dimension, "optimal_factors: inner dimension must be positive");
    const std::size_t r = std::min(d, svd.rank());
    const std::vector<double> sigma(svd.sigma.begin(), svd.sigma.begin() + static_cast<std::ptrdiff_t>(r));
    const std::size_t count = split.arity();
    const double p = split.p();

    FactorSet out;
    out.inner_dim = d;
    out.factors.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::vector<double> scale = diag_power(sigma, p / split.part(i));
        if (i == 0) {
            out.factors.push_back(scale_cols(svd.left.left_cols(r), scale).pad_cols(d));
        } else if (i + 1 == count) {
            out.factors.push_back(scale_cols(svd.right.left_cols(r), scale).pad_cols(d));
        } else {
            out.factors.push_back(DenseMatrix::diagonal(d, d, scale));
        }
    }
    return out;
}

FactorSet optimal_factors(const DenseMatrix& x, const ExponentSplit& split, std::size_t d) {
    if (d == 0) fail(ErrorKind::Dimension, "optimal_factors: inner dimension must be positive");
    const SpectralDecomposition svd = thin_svd(x);
    const std::size_t r = svd.rank();
    if (d < r) {
        fail(ErrorKind::InfeasibleDimension, "optimal_factors: inner dimension " + std::to_string(d) +
                                                 " is below the numerical rank " + std::to_string(r));
    }
    return spectral_factors(svd, split, d);
}

FactorSet optimal_factors_two(const DenseMatrix& x, const ExponentSplit& split, std::size_t d) {
    if (split.arity() != 2) fail(ErrorKind::InvalidInput, "optimal_factors_two: split must have two parts");
    return optimal_factors(x, split, d);
}

FactorSet optimal_factors_three(const DenseMatrix& x, const ExponentSplit& split, std::size_t d) {
    if (split.arity() != 3) fail(ErrorKind::InvalidInput, "optimal_factors_three: split must have three parts");
    return optimal_factors(x, split, d);
}

FactorSet optimal_factors_m(const DenseMatrix& x, const ExponentSplit& split, std::size_t d) {
    return optimal_factors(x, split, d);
}

std::vector<double> factor_penalties(const FactorSet& fs, const ExponentSplit& split) {
    if (fs.arity() != split.arity()) {
        fail(ErrorKind::InvalidInput, "objective: " + std::to_string(fs.arity()) + " factors but " +
                                          std::to_string(split.arity()) + " exponents");
    }
    std::vector<double> out(fs.arity());
    for (std::size_t i = 0; i < fs.arity(); ++i)
        out[i] = schatten_power(fs.factors[i], SchattenExponent(split.part(i)));
    return out;
}

double product_objective(const FactorSet& fs, const ExponentSplit& split) {
    const std::vector<double> penalties = factor_penalties(fs, split);
    double prod = 1.0;
    for (std::size_t i = 0; i < penalties.size(); ++i) {
        if (penalties[i] == 0.0) return 0.0;
        prod *= std::pow(penalties[i], 1.0 / split.part(i));
    }
    return prod;
}

double weighted_sum_objective(const FactorSet& fs, const ExponentSplit& split) {
    const std::vector<double> penalties = factor_penalties(fs, split);
    double sum = 0.0;
    for (std::size_t i = 0; i < penalties.size(); ++i) sum += penalties[i] / split.part(i);
    const double inner = split.p() * sum;
    return inner == 0.0 ? 0.0 : std::pow(inner, 1.0 / split.p());
}

} // namespace sqnm

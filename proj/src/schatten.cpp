#include "sqnm/schatten.hpp"

#include "sqnm/error.hpp"
#include "sqnm/linalg/svd.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace sqnm {

namespace {

constexpr double kOrthogonalityTolerance = 1e-10;

double pow_nonneg(double s, double p) {
    if (s == 0.0) return 0.0;
    if (p == 1.0) return s;
    if (p == 2.0) return s * s;
    return std::pow(s, p);
}

void require_nonnegative(std::span<const double> sigma, const char* what) {
    for (double s : sigma) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            fail(ErrorKind::InvalidInput, std::string(what) + ": entries must be finite and nonnegative");
        }
    }
}

} // namespace

SchattenExponent::SchattenExponent(double p) : p_(p) {
    if (!(p > 0.0) || !std::isfinite(p)) {
        fail(ErrorKind::InvalidExponent, "Schatten exponent must be finite and > 0, got " + std::to_string(p));
    }
}

double trace_power(std::span<const double> sigma, SchattenExponent p) {
    require_nonnegative(sigma, "trace_power");
    double acc = 0.0;
    for (double s : sigma) acc += pow_nonneg(s, p.value());
    return acc;
}

double schatten_power_from_values(std::span<const double> sigma, SchattenExponent p) {
    require_nonnegative(sigma, "schatten_power");
    double smax = 0.0;
    for (double s : sigma) smax = std::max(smax, s);
    const double cutoff = kRankTolerance * smax;
    double acc = 0.0;
    for (double s : sigma)
        if (s > cutoff) acc += pow_nonneg(s, p.value());
    return acc;
}

double schatten_norm_from_values(std::span<const double> sigma, SchattenExponent p) {
    const double total = schatten_power_from_values(sigma, p);
    if (total == 0.0) return 0.0;
    return p.value() == 1.0 ? total : std::pow(total, 1.0 / p.value());
}

double schatten_power(const DenseMatrix& x, SchattenExponent p) {
    return schatten_power_from_values(singular_values(x), p);
}

double schatten_norm(const DenseMatrix& x, SchattenExponent p) {
    return schatten_norm_from_values(singular_values(x), p);
}

double rotation_trace_gap(std::span<const double> sigma, const DenseMatrix& a, SchattenExponent p) {
    if (p.value() > 1.0) {
        fail(ErrorKind::InvalidExponent, "rotation_trace_gap: p must lie in (0, 1]");
    }
    require_nonnegative(sigma, "rotation_trace_gap");
    const std::size_t r = sigma.size();
    if (a.rows() != r || a.cols() != r) {
        fail(ErrorKind::Dimension, "rotation_trace_gap: A must be square and match sigma");
    }
    require_finite(a, "rotation_trace_gap");
    if (orthonormality_defect(a) > kOrthogonalityTolerance ||
        orthonormality_defect(a.transpose()) > kOrthogonalityTolerance) {
        fail(ErrorKind::InvalidInput, "rotation_trace_gap: A is not orthogonal to 1e-10");
    }

    // (A diag(sigma) A^T)_kk = sum_i a_ki^2 sigma_i, nonnegative by construction.
    double rotated = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
        double diag = 0.0;
        for (std::size_t i = 0; i < r; ++i) diag += a(k, i) * a(k, i) * sigma[i];
        rotated += pow_nonneg(diag, p.value());
    }
    return rotated - trace_power(sigma, p);
}

} // namespace sqnm

#include "sqnm/linalg/svd.hpp"

#include "sqnm/error.hpp"
#include "sqnm/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sqnm {

namespace {

constexpr int kMaxSweeps = 80;

struct JacobiResult {
    DenseMatrix columns; // W = A V, mutually orthogonal columns
    DenseMatrix v;       // accumulated rotations
};

// Hestenes one-sided Jacobi on a matrix with rows >= cols.
JacobiResult one_sided_jacobi(DenseMatrix w) {
    const std::size_t m = w.rows();
    const std::size_t n = w.cols();
    const auto& k = simd::kernels();
    DenseMatrix v = DenseMatrix::identity(n);
    const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<std::size_t>(m, 4));

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double* wp = w.col(p).data();
                double* wq = w.col(q).data();
                const simd::PairSums s = k.pair_sums(wp, wq, m);
                if (s.xx == 0.0 || s.yy == 0.0) continue;
                if (std::abs(s.xy) <= tol * std::sqrt(s.xx) * std::sqrt(s.yy)) continue;

                const double zeta = (s.yy - s.xx) / (2.0 * s.xy);
                // |t| <= 1, and for huge |zeta| the root is replaced by |zeta| itself.
                const double az = std::abs(zeta);
                const double root = az < 1e150 ? std::sqrt(1.0 + az * az) : az;
                const double t = std::copysign(1.0, zeta) / (az + root);
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = c * t;
                k.rotate(wp, wq, m, c, sn);
                k.rotate(v.col(p).data(), v.col(q).data(), n, c, sn);
                rotated = true;
            }
        }
        if (!rotated) break;
    }
    return {std::move(w), std::move(v)};
}

// Fill every column of `basis` not marked in `filled` with a unit vector orthogonal
// to all filled columns (Gram-Schmidt on coordinate vectors, two passes).
void complete_orthonormal(DenseMatrix& basis, std::vector<bool>& filled) {
    const std::size_t m = basis.rows();
    const auto& k = simd::kernels();
    std::vector<double> cand(m);
    for (std::size_t slot = 0; slot < basis.cols(); ++slot) {
        if (filled[slot]) continue;
        double best_norm = -1.0;
        std::vector<double> best;
        for (std::size_t e = 0; e < m; ++e) {
            std::fill(cand.begin(), cand.end(), 0.0);
            cand[e] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t j = 0; j < basis.cols(); ++j) {
                    if (!filled[j]) continue;
                    const double proj = k.dot(basis.col(j).data(), cand.data(), m);
                    k.axpy(-proj, basis.col(j).data(), cand.data(), m);
                }
            }
            const double nrm = std::sqrt(k.sum_squares(cand.data(), m));
            if (nrm > best_norm) {
                best_norm = nrm;
                best = cand;
            }
            if (nrm > 0.7) break;
        }
        k.scale(1.0 / best_norm, best.data(), m);
        std::copy(best.begin(), best.end(), basis.col(slot).begin());
        filled[slot] = true;
    }
}

struct RawSvd {
    DenseMatrix left;
    std::vector<double> sigma;
    DenseMatrix right;
};

RawSvd jacobi_svd(const DenseMatrix& x, bool want_vectors) {
    const bool transposed = x.rows() < x.cols();
    DenseMatrix a = transposed ? x.transpose() : x;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    const double amax = a.max_abs();
    RawSvd out;
    out.sigma.assign(n, 0.0);
    if (amax == 0.0) {
        if (want_vectors) {
            out.left = DenseMatrix(m, n);
            for (std::size_t j = 0; j < n; ++j) out.left(j, j) = 1.0;
            out.right = DenseMatrix::identity(n);
        }
    } else {
        a *= 1.0 / amax;
        JacobiResult jr = one_sided_jacobi(std::move(a));
        std::vector<double> norms(n);
        for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(simd::sum_squares(jr.columns.col(j)));

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

        const double cutoff = kRankTolerance * norms[order[0]];
        for (std::size_t j = 0; j < n; ++j) out.sigma[j] = norms[order[j]] * amax;

        if (want_vectors) {
            out.left = DenseMatrix(m, n);
            out.right = DenseMatrix(n, n);
            std::vector<bool> filled(n, false);
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t src = order[j];
                std::copy(jr.v.col(src).begin(), jr.v.col(src).end(), out.right.col(j).begin());
                if (norms[src] > cutoff) {
                    auto dst = out.left.col(j);
                    std::copy(jr.columns.col(src).begin(), jr.columns.col(src).end(), dst.begin());
                    simd::scale(1.0 / norms[src], dst);
                    filled[j] = true;
                }
            }
            complete_orthonormal(out.left, filled);
        }
    }
    if (transposed && want_vectors) std::swap(out.left, out.right);
    return out;
}

} // namespace

std::size_t SpectralDecomposition::rank() const noexcept { return numerical_rank(sigma); }

DenseMatrix SpectralDecomposition::reconstruct() const {
    return multiply_nt(scale_cols(left, sigma), right);
}

SpectralDecomposition thin_svd(const DenseMatrix& x, std::optional<std::size_t> k) {
    if (x.empty()) fail(ErrorKind::Dimension, "thin_svd: empty matrix");
    require_finite(x, "thin_svd");
    const std::size_t full = std::min(x.rows(), x.cols());
    if (k && (*k == 0 || *k > full)) {
        fail(ErrorKind::Dimension, "thin_svd: k=" + std::to_string(*k) +
                                       " must lie in [1, " + std::to_string(full) + "]");
    }
    RawSvd raw = jacobi_svd(x, true);
    const std::size_t keep = k.value_or(full);
    SpectralDecomposition out;
    out.left = raw.left.left_cols(keep);
    out.right = raw.right.left_cols(keep);
    out.sigma.assign(raw.sigma.begin(), raw.sigma.begin() + static_cast<std::ptrdiff_t>(keep));
    return out;
}

std::vector<double> singular_values(const DenseMatrix& x) {
    if (x.empty()) fail(ErrorKind::Dimension, "singular_values: empty matrix");
    require_finite(x, "singular_values");
    return jacobi_svd(x, false).sigma;
}

std::size_t numerical_rank(std::span<const double> sigma) noexcept {
    double smax = 0.0;
    for (double s : sigma) smax = std::max(smax, s);
    if (smax == 0.0) return 0;
    const double cutoff = kRankTolerance * smax;
    return static_cast<std::size_t>(
        std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s > cutoff; }));
}

std::vector<double> diag_power(std::span<const double> sigma, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        fail(ErrorKind::InvalidExponent, "diag_power: exponent must be positive and finite");
    }
    std::vector<double> out(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const double s = sigma[i];
        if (!(s >= 0.0) || !std::isfinite(s)) {
            fail(ErrorKind::InvalidInput, "diag_power: entries must be finite and nonnegative");
        }
        out[i] = s == 0.0 ? 0.0 : (alpha == 1.0 ? s : std::pow(s, alpha));
    }
    return out;
}

} // namespace sqnm

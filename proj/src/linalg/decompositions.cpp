#include "sqnm/linalg/decompositions.hpp"

#include "sqnm/error.hpp"
#include "sqnm/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sqnm {

QrFactors householder_qr(const DenseMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n || n == 0) fail(ErrorKind::Dimension, "householder_qr: need rows >= cols >= 1");
    require_finite(a, "householder_qr");

    const auto& k = simd::kernels();
    DenseMatrix work = a;
    std::vector<std::vector<double>> reflectors(n);

    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t len = m - j;
        double* x = work.col(j).data() + j;
        const double norm = std::sqrt(k.sum_squares(x, len));
        if (norm == 0.0) continue;
        const double alpha = x[0] > 0.0 ? -norm : norm;
        std::vector<double> v(x, x + len);
        v[0] -= alpha;
        const double vnorm = std::sqrt(k.sum_squares(v.data(), len));
        if (vnorm == 0.0) continue;
        k.scale(1.0 / vnorm, v.data(), len);
        for (std::size_t c = j; c < n; ++c) {
            double* col = work.col(c).data() + j;
            k.axpy(-2.0 * k.dot(v.data(), col, len), v.data(), col, len);
        }
        reflectors[j] = std::move(v);
    }

    QrFactors out{DenseMatrix(m, n), DenseMatrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) out.q(j, j) = 1.0;
    for (std::size_t jj = n; jj-- > 0;) {
        const auto& v = reflectors[jj];
        if (v.empty()) continue;
        const std::size_t len = m - jj;
        for (std::size_t c = 0; c < n; ++c) {
            double* col = out.q.col(c).data() + jj;
            k.axpy(-2.0 * k.dot(v.data(), col, len), v.data(), col, len);
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i) out.r(i, j) = work(i, j);

    for (std::size_t j = 0; j < n; ++j) {
        if (out.r(j, j) < 0.0) {
            for (std::size_t c = j; c < n; ++c) out.r(j, c) = -out.r(j, c);
            simd::scale(-1.0, out.q.col(j));
        }
    }
    return out;
}

DenseMatrix cholesky_solve(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n) fail(ErrorKind::Dimension, "cholesky_solve: shape mismatch");

    // Lower factor stored column-major; row access goes through the transpose.
    DenseMatrix lt(n, n); // lt(j, i) = L(i, j), so column i of lt is row i of L
    const auto& k = simd::kernels();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double s = a(i, j) - k.dot(lt.col(i).data(), lt.col(j).data(), j);
            if (i == j) {
                if (!(s > 0.0)) {
                    throw NumericalFailure("cholesky_solve: matrix is not positive definite", {});
                }
                lt(i, i) = std::sqrt(s);
            } else {
                lt(j, i) = s / lt(j, j);
            }
        }
    }

    DenseMatrix x = b;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        auto col = x.col(c);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = (col[i] - k.dot(lt.col(i).data(), col.data(), i)) / lt(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = col[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= lt(i, j) * col[j];
            col[i] = s / lt(i, i);
        }
    }
    return x;
}

DenseMatrix pseudo_inverse(const DenseMatrix& a, double rcond) {
    const SpectralDecomposition svd = thin_svd(a);
    const double cutoff = rcond * (svd.sigma.empty() ? 0.0 : svd.sigma.front());
    std::vector<double> inv(svd.sigma.size(), 0.0);
    for (std::size_t i = 0; i < inv.size(); ++i)
        if (svd.sigma[i] > cutoff && svd.sigma[i] > 0.0) inv[i] = 1.0 / svd.sigma[i];
    return multiply_nt(scale_cols(svd.right, inv), svd.left);
}

DenseMatrix least_squares(const DenseMatrix& a, const DenseMatrix& b, double rcond) {
    if (a.rows() != b.rows()) fail(ErrorKind::Dimension, "least_squares: row count mismatch");
    return multiply(pseudo_inverse(a, rcond), b);
}

double spectral_norm(const DenseMatrix& a) {
    const auto s = singular_values(a);
    return s.empty() ? 0.0 : s.front();
}

} // namespace sqnm

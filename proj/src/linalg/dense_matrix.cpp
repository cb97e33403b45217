#include "sqnm/linalg/dense_matrix.hpp"

#include "sqnm/error.hpp"
#include "sqnm/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace sqnm {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        fail(ErrorKind::Dimension, std::string(op) + ": shape mismatch " +
                                       std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                       " vs " + std::to_string(b.rows()) + "x" +
                                       std::to_string(b.cols()));
    }
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows.begin()->size();
    DenseMatrix out(m, n);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != n) fail(ErrorKind::Dimension, "from_rows: ragged initializer");
        std::size_t j = 0;
        for (double v : row) out(i, j++) = v;
        ++i;
    }
    require_finite(out, "from_rows");
    return out;
}

DenseMatrix DenseMatrix::from_row_major(std::size_t rows, std::size_t cols,
                                        std::span<const double> values) {
    if (values.size() != rows * cols) {
        fail(ErrorKind::Dimension, "from_row_major: expected " + std::to_string(rows * cols) +
                                       " values, got " + std::to_string(values.size()));
    }
    DenseMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = values[i * cols + j];
    require_finite(out, "from_row_major");
    return out;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> values) {
    return diagonal(values.size(), values.size(), values);
}

DenseMatrix DenseMatrix::diagonal(std::size_t rows, std::size_t cols,
                                  std::span<const double> values) {
    if (values.size() > std::min(rows, cols)) {
        fail(ErrorKind::Dimension, "diagonal: too many diagonal values for shape");
    }
    DenseMatrix out(rows, cols);
    for (std::size_t i = 0; i < values.size(); ++i) out(i, i) = values[i];
    return out;
}

std::vector<double> DenseMatrix::to_row_major() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i * cols_ + j] = (*this)(i, j);
    return out;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) out(j, i) = (*this)(i, j);
    return out;
}

DenseMatrix DenseMatrix::left_cols(std::size_t k) const {
    if (k > cols_) fail(ErrorKind::Dimension, "left_cols: k exceeds column count");
    DenseMatrix out(rows_, k);
    std::copy_n(data_.begin(), rows_ * k, out.data_.begin());
    return out;
}

DenseMatrix DenseMatrix::pad_cols(std::size_t cols) const {
    if (cols < cols_) fail(ErrorKind::Dimension, "pad_cols: cannot shrink");
    DenseMatrix out(rows_, cols);
    std::copy(data_.begin(), data_.end(), out.data_.begin());
    return out;
}

bool DenseMatrix::is_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double DenseMatrix::frobenius_norm() const {
    return std::sqrt(simd::sum_squares(data_));
}

double DenseMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
    require_same_shape(*this, other, "operator+=");
    simd::axpy(1.0, other.data_, data_);
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
    require_same_shape(*this, other, "operator-=");
    simd::axpy(-1.0, other.data_, data_);
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double alpha) {
    simd::scale(alpha, data_);
    return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double alpha, DenseMatrix a) { return a *= alpha; }

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) fail(ErrorKind::Dimension, "multiply: inner dimension mismatch");
    const auto& k = simd::kernels();
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        double* cj = c.col(j).data();
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const double blj = b(l, j);
            if (blj != 0.0) k.axpy(blj, a.col(l).data(), cj, a.rows());
        }
    }
    return c;
}

DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) fail(ErrorKind::Dimension, "multiply_tn: row count mismatch");
    const auto& k = simd::kernels();
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i)
            c(i, j) = k.dot(a.col(i).data(), b.col(j).data(), a.rows());
    return c;
}

DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) fail(ErrorKind::Dimension, "multiply_nt: column count mismatch");
    const auto& k = simd::kernels();
    DenseMatrix c(a.rows(), b.rows());
    for (std::size_t j = 0; j < b.rows(); ++j) {
        double* cj = c.col(j).data();
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const double bjl = b(j, l);
            if (bjl != 0.0) k.axpy(bjl, a.col(l).data(), cj, a.rows());
        }
    }
    return c;
}

DenseMatrix scale_cols(const DenseMatrix& a, std::span<const double> d) {
    if (d.size() != a.cols()) fail(ErrorKind::Dimension, "scale_cols: length mismatch");
    DenseMatrix out = a;
    for (std::size_t j = 0; j < a.cols(); ++j) simd::scale(d[j], out.col(j));
    return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

double relative_frobenius_error(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "relative_frobenius_error");
    const double denom = std::max(b.frobenius_norm(), std::numeric_limits<double>::min());
    return (a - b).frobenius_norm() / denom;
}

double orthonormality_defect(const DenseMatrix& a) {
    const DenseMatrix g = multiply_tn(a, a);
    double m = 0.0;
    for (std::size_t j = 0; j < g.cols(); ++j)
        for (std::size_t i = 0; i < g.rows(); ++i)
            m = std::max(m, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    return m;
}

void require_finite(const DenseMatrix& m, const char* what) {
    if (!m.is_finite()) {
        fail(ErrorKind::InvalidInput, std::string(what) + ": matrix contains non-finite entries");
    }
}

std::ostream& operator<<(std::ostream& os, const DenseMatrix& m) {
    os << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i == 0 ? "[" : " [");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
        os << "]" << (i + 1 < m.rows() ? "\n" : "");
    }
    return os << "]";
}

} // namespace sqnm

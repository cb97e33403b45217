#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace sqnm {

/// Dense real matrix, column-major storage.
///
/// Logical indexing is (row, col). Columns are contiguous so the vector kernels
/// in sqnm::simd operate on whole columns.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    /// Row-major nested initializer, e.g. {{4, 0}, {0, 1}}. Rows must be equal length.
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static DenseMatrix from_row_major(std::size_t rows, std::size_t cols,
                                      std::span<const double> values);
    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> values);
    static DenseMatrix diagonal(std::size_t rows, std::size_t cols, std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

    std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const noexcept {
        return {data_.data() + j * rows_, rows_};
    }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    std::vector<double> to_row_major() const;

    DenseMatrix transpose() const;
    /// Leading columns [0, k).
    DenseMatrix left_cols(std::size_t k) const;
    /// Copy with zero columns appended up to `cols` (no-op when already that wide).
    DenseMatrix pad_cols(std::size_t cols) const;

    bool is_finite() const noexcept;
    double frobenius_norm() const;
    double max_abs() const noexcept;

    DenseMatrix& operator+=(const DenseMatrix& other);
    DenseMatrix& operator-=(const DenseMatrix& other);
    DenseMatrix& operator*=(double alpha);

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double alpha, DenseMatrix a);

/// A * B
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// A^T * B
DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b);
/// A * B^T
DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b);
/// A * diag(d), d.size() == a.cols()
DenseMatrix scale_cols(const DenseMatrix& a, std::span<const double> d);

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
/// ||a - b||_F / max(||b||_F, tiny)
double relative_frobenius_error(const DenseMatrix& a, const DenseMatrix& b);
/// max |A^T A - I|
double orthonormality_defect(const DenseMatrix& a);

/// Throws InvalidInput when any entry is NaN/Inf. `what` names the operand.
void require_finite(const DenseMatrix& m, const char* what);

std::ostream& operator<<(std::ostream& os, const DenseMatrix& m);

} // namespace sqnm

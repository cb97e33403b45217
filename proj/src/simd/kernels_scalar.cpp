#include "sqnm/simd/kernels.hpp"

namespace sqnm::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_squares_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void rotate_scalar(double* x, double* y, std::size_t n, double c, double s) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

PairSums pair_sums_scalar(const double* x, const double* y, std::size_t n) {
    PairSums out;
    for (std::size_t i = 0; i < n; ++i) {
        out.xx += x[i] * x[i];
        out.yy += y[i] * y[i];
        out.xy += x[i] * y[i];
    }
    return out;
}

double masked_diff_scalar(const double* a, const double* b, const std::uint8_t* mask,
                          double* r, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = mask[i] ? a[i] - b[i] : 0.0;
        r[i] = v;
        acc += v * v;
    }
    return acc;
}

} // namespace

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{
        Isa::Scalar,     dot_scalar,       sum_squares_scalar, axpy_scalar,
        scale_scalar,    rotate_scalar,    pair_sums_scalar,   masked_diff_scalar,
    };
    return table;
}

} // namespace sqnm::simd

// Compiled with -mavx2 -mfma; only reached after a CPUID check in dispatch.cpp.

#include "sqnm/simd/kernels.hpp"

#include <immintrin.h>

namespace sqnm::simd {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_squares_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d a = _mm256_loadu_pd(x + i);
        const __m256d b = _mm256_loadu_pd(x + i + 4);
        acc0 = _mm256_fmadd_pd(a, a, acc0);
        acc1 = _mm256_fmadd_pd(b, b, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(x + i);
        acc0 = _mm256_fmadd_pd(a, a, acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(double alpha, double* x, std::size_t n) {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(a, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) x[i] *= alpha;
}

void rotate_avx2(double* x, double* y, std::size_t n, double c, double s) {
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d yi = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(x + i, _mm256_fmsub_pd(vc, xi, _mm256_mul_pd(vs, yi)));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, xi, _mm256_mul_pd(vc, yi)));
    }
    for (; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

PairSums pair_sums_avx2(const double* x, const double* y, std::size_t n) {
    __m256d xx = _mm256_setzero_pd();
    __m256d yy = _mm256_setzero_pd();
    __m256d xy = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(x + i);
        const __m256d b = _mm256_loadu_pd(y + i);
        xx = _mm256_fmadd_pd(a, a, xx);
        yy = _mm256_fmadd_pd(b, b, yy);
        xy = _mm256_fmadd_pd(a, b, xy);
    }
    PairSums out{hsum(xx), hsum(yy), hsum(xy)};
    for (; i < n; ++i) {
        out.xx += x[i] * x[i];
        out.yy += y[i] * y[i];
        out.xy += x[i] * y[i];
    }
    return out;
}

double masked_diff_avx2(const double* a, const double* b, const std::uint8_t* mask,
                        double* r, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const __m256i zero = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        std::int32_t bytes;
        __builtin_memcpy(&bytes, mask + i, sizeof(bytes));
        // widen 4 mask bytes to 4 x 64-bit lanes, then build an all-ones lane mask
        const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(bytes));
        const __m256d keep = _mm256_castsi256_pd(
            _mm256_xor_si256(_mm256_cmpeq_epi64(wide, zero), _mm256_set1_epi64x(-1)));
        const __m256d d = _mm256_and_pd(
            keep, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        _mm256_storeu_pd(r + i, d);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double v = mask[i] ? a[i] - b[i] : 0.0;
        r[i] = v;
        total += v * v;
    }
    return total;
}

} // namespace

const KernelTable& avx2_kernels() noexcept {
    static const KernelTable table{
        Isa::Avx2,   dot_avx2,    sum_squares_avx2, axpy_avx2,
        scale_avx2,  rotate_avx2, pair_sums_avx2,   masked_diff_avx2,
    };
    return table;
}

} // namespace sqnm::simd

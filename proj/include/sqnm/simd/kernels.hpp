#pragma once

// Contiguous double-precision vector kernels used by every dense routine.
//
// Each kernel has a portable scalar reference implementation and, on x86-64, an
// AVX2/FMA variant compiled in a separate translation unit. The variant is picked
// once at startup from CPUID and can be overridden (tests pin both sides to check
// equivalence). Results of the two variants agree up to floating-point
// reassociation in the reductions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace sqnm::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

struct PairSums {
    double xx = 0.0;
    double yy = 0.0;
    double xy = 0.0;
};

struct KernelTable {
    Isa isa;
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum_squares)(const double* x, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*scale)(double alpha, double* x, std::size_t n);
    // (x, y) <- (c*x - s*y, s*x + c*y)
    void (*rotate)(double* x, double* y, std::size_t n, double c, double s);
    // x.x, y.y and x.y in a single pass (one-sided Jacobi inner loop)
    PairSums (*pair_sums)(const double* x, const double* y, std::size_t n);
    // r = mask ? a - b : 0, returns sum of r^2
    double (*masked_diff)(const double* a, const double* b, const std::uint8_t* mask,
                          double* r, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
#if defined(SQNM_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif

bool isa_supported(Isa isa) noexcept;
Isa best_isa() noexcept;

/// Active table. Defaults to best_isa().
const KernelTable& kernels() noexcept;
const KernelTable& kernels_for(Isa isa);

/// Throws sqnm::Error(InvalidInput) if `isa` is not available on this host/build.
void select_isa(Isa isa);
Isa active_isa() noexcept;

/// RAII pin used by tests and benchmarks.
class ScopedIsa {
public:
    explicit ScopedIsa(Isa isa) : previous_(active_isa()) { select_isa(isa); }
    ~ScopedIsa() { select_isa(previous_); }
    ScopedIsa(const ScopedIsa&) = delete;
    ScopedIsa& operator=(const ScopedIsa&) = delete;

private:
    Isa previous_;
};

// Span conveniences over the active table.
inline double dot(std::span<const double> x, std::span<const double> y) {
    return kernels().dot(x.data(), y.data(), x.size());
}
inline double sum_squares(std::span<const double> x) {
    return kernels().sum_squares(x.data(), x.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    kernels().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(double alpha, std::span<double> x) {
    kernels().scale(alpha, x.data(), x.size());
}

} // namespace sqnm::simd

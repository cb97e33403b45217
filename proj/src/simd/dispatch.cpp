#include "sqnm/error.hpp"
#include "sqnm/simd/kernels.hpp"

#include <atomic>

namespace sqnm::simd {

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(SQNM_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

Isa best_isa() noexcept {
    return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_supported(isa)) {
        fail(ErrorKind::InvalidInput,
             "kernel variant '" + std::string(to_string(isa)) + "' is not available");
    }
#if defined(SQNM_HAVE_AVX2)
    if (isa == Isa::Avx2) return avx2_kernels();
#endif
    return scalar_kernels();
}

namespace {

std::atomic<const KernelTable*>& active_slot() noexcept {
    static std::atomic<const KernelTable*> slot{
        isa_supported(Isa::Avx2) ?
#if defined(SQNM_HAVE_AVX2)
            &avx2_kernels()
#else
            &scalar_kernels()
#endif
            : &scalar_kernels()};
    return slot;
}

} // namespace

const KernelTable& kernels() noexcept {
    return *active_slot().load(std::memory_order_acquire);
}

void select_isa(Isa isa) {
    active_slot().store(&kernels_for(isa), std::memory_order_release);
}

Isa active_isa() noexcept { return kernels().isa; }

} // namespace sqnm::simd

#include "itad/simd/caps.hpp"

#include <cstdlib>
#include <stdexcept>

#include "itad/simd/vmath.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <cpuid.h>
#endif

namespace itad::simd {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
    unsigned eax = 0, ebx = 0, ecx = 0, edx = 0;
    if (!__get_cpuid(1, &eax, &ebx, &ecx, &edx)) return false;
    const bool fma = (ecx & (1u << 12)) != 0;
    const bool osxsave = (ecx & (1u << 27)) != 0;
    const bool avx = (ecx & (1u << 28)) != 0;
    if (!fma || !osxsave || !avx) return false;
    // XCR0: OS must enable XMM (bit 1) and YMM (bit 2) state.
    unsigned lo = 0, hi = 0;
    __asm__ volatile("xgetbv" : "=a"(lo), "=d"(hi) : "c"(0));
    if ((lo & 0x6) != 0x6) return false;
    if (!__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) return false;
    return (ebx & (1u << 5)) != 0;  // AVX2
#else
    return false;
#endif
}

namespace {

Backend resolve_backend() {
    const char* env = std::getenv("ITAD_SIMD");
    const std::string mode = env ? env : "auto";
    const bool usable = detail::avx2_compiled_in() && cpu_has_avx2_fma();
    if (mode == "scalar") return Backend::scalar;
    if (mode == "avx2") {
        if (!usable)
            throw std::runtime_error(
                "ITAD_SIMD=avx2 requested but AVX2+FMA is unavailable");
        return Backend::avx2;
    }
    return usable ? Backend::avx2 : Backend::scalar;
}

}  // namespace

Backend active_backend() {
    static const Backend b = resolve_backend();
    return b;
}

std::string backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace itad::simd

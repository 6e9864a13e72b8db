#pragma once

#include <string>

namespace itad::simd {

enum class Backend {
    scalar,
    avx2,
};

// Backend active for this process. Resolved once, on first use:
//   ITAD_SIMD=scalar  force the scalar reference kernels
//   ITAD_SIMD=avx2    force AVX2 (error if the CPU lacks AVX2+FMA)
//   ITAD_SIMD=auto    (default) pick AVX2 when available
Backend active_backend();

// True when the running CPU supports AVX2 and FMA3.
bool cpu_has_avx2_fma();

std::string backend_name(Backend b);

}  // namespace itad::simd

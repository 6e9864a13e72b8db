#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "itad/simd/vmath.hpp"
#include "vmath_common.hpp"

// Scalar reference kernels. These spell out every rounded operation (explicit
// std::fma, fixed order) so the AVX2 variants can replay the identical
// sequence lane-wise and produce bit-identical results.

namespace itad::simd::detail {

namespace {

inline double two_pow(long long k) {
    // k in [-1022, 1023]
    return std::bit_cast<double>(static_cast<std::uint64_t>(k + 1023) << 52);
}

inline double exp_one(double x) {
    if (std::isnan(x)) return x;
    if (x > kExpOverflow) return std::numeric_limits<double>::infinity();
    if (x < kExpUnderflow) return 0.0;

    const double n = std::nearbyint(x * kLog2E);
    double r = std::fma(-n, kLn2Hi, x);
    r = std::fma(-n, kLn2Lo, r);

    double p = kExpC13;
    p = std::fma(p, r, kExpC12);
    p = std::fma(p, r, kExpC11);
    p = std::fma(p, r, kExpC10);
    p = std::fma(p, r, kExpC9);
    p = std::fma(p, r, kExpC8);
    p = std::fma(p, r, kExpC7);
    p = std::fma(p, r, kExpC6);
    p = std::fma(p, r, kExpC5);
    p = std::fma(p, r, kExpC4);
    p = std::fma(p, r, kExpC3);
    p = std::fma(p, r, kExpC2);
    p = std::fma(p, r, 1.0);
    p = std::fma(p, r, 1.0);

    // Scale by 2^n in two exact halves so |n| up to 1075 stays in range.
    const double n1 = std::floor(n * 0.5);
    const double n2 = n - n1;
    const double y = p * two_pow(static_cast<long long>(n1));
    return y * two_pow(static_cast<long long>(n2));
}

inline double log_one(double x) {
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (std::isnan(x) || x < 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(x)) return x;

    double dk = 0.0;
    if (x < std::numeric_limits<double>::min()) {  // subnormal
        x *= kTwo54;
        dk = -54.0;
    }
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    dk += static_cast<double>(static_cast<long long>(bits >> 52) - 1023);
    bits = (bits & 0x000FFFFFFFFFFFFFULL) | 0x3FF0000000000000ULL;
    double m = std::bit_cast<double>(bits);
    if (m >= kSqrt2) {
        m = m * 0.5;
        dk = dk + 1.0;
    }

    const double f = m - 1.0;
    const double s = f / (2.0 + f);
    const double z = s * s;
    const double w = z * z;
    const double t1 = w * std::fma(w, std::fma(w, kLg6, kLg4), kLg2);
    const double t2 = z * std::fma(w, std::fma(w, std::fma(w, kLg7, kLg5), kLg3), kLg1);
    const double rr = t1 + t2;
    const double hfsq = 0.5 * f * f;
    return dk * kLn2Hi - ((hfsq - (s * (hfsq + rr) + dk * kLn2Lo)) - f);
}

inline double entropy_one(double p) {
    if (p <= 0.0) return 0.0;
    return 0.0 - (p * log_one(p));  // 0 - y, not -y: keeps +0 at p = 1
}

}  // namespace

void exp_span_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = exp_one(x[i]);
}

void log_span_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = log_one(x[i]);
}

void entropy_span_scalar(const double* p, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = entropy_one(p[i]);
}

}  // namespace itad::simd::detail

#include <cstdint>
#include <cstdlib>

#include "itad/simd/vmath.hpp"
#include "vmath_common.hpp"

// AVX2 variants. Lane-for-lane these replay the exact operation sequence of
// vmath_scalar.cpp (same fma placement, same order), so results are
// bit-identical to the scalar reference; the test suite asserts this.

#ifdef ITAD_BUILD_AVX2

#include <immintrin.h>

namespace itad::simd::detail {

namespace {

constexpr double kMagic = 6755399441055744.0;  // 2^52 + 2^51

inline __m256i to_int64(__m256d v) {
    // Exact for integer-valued |v| < 2^51.
    const __m256d magic = _mm256_set1_pd(kMagic);
    return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(v, magic)),
                            _mm256_castpd_si256(magic));
}

inline __m256d two_pow(__m256i k) {
    const __m256i bits =
        _mm256_slli_epi64(_mm256_add_epi64(k, _mm256_set1_epi64x(1023)), 52);
    return _mm256_castsi256_pd(bits);
}

inline __m256d exp4(__m256d x) {
    const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-746.0)),
                                     _mm256_set1_pd(710.0));
    const __m256d n = _mm256_round_pd(
        _mm256_mul_pd(xc, _mm256_set1_pd(kLog2E)),
        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256d neg_n = _mm256_sub_pd(_mm256_setzero_pd(), n);
    __m256d r = _mm256_fmadd_pd(neg_n, _mm256_set1_pd(kLn2Hi), xc);
    r = _mm256_fmadd_pd(neg_n, _mm256_set1_pd(kLn2Lo), r);

    __m256d p = _mm256_set1_pd(kExpC13);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC12));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC11));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC10));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC9));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC8));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC7));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC6));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC5));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC4));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC3));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpC2));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    const __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
    const __m256d n2 = _mm256_sub_pd(n, n1);
    __m256d y = _mm256_mul_pd(p, two_pow(to_int64(n1)));
    y = _mm256_mul_pd(y, two_pow(to_int64(n2)));

    const __m256d inf = _mm256_set1_pd(__builtin_inf());
    const __m256d hi_mask = _mm256_cmp_pd(x, _mm256_set1_pd(kExpOverflow), _CMP_GT_OQ);
    const __m256d lo_mask = _mm256_cmp_pd(x, _mm256_set1_pd(kExpUnderflow), _CMP_LT_OQ);
    const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
    y = _mm256_blendv_pd(y, inf, hi_mask);
    y = _mm256_blendv_pd(y, _mm256_setzero_pd(), lo_mask);
    y = _mm256_blendv_pd(y, x, nan_mask);
    return y;
}

inline __m256d log4(__m256d x) {
    const __m256d dbl_min = _mm256_set1_pd(2.2250738585072014e-308);
    const __m256d sub_mask = _mm256_cmp_pd(x, dbl_min, _CMP_LT_OQ);
    const __m256d xs = _mm256_blendv_pd(
        x, _mm256_mul_pd(x, _mm256_set1_pd(kTwo54)), sub_mask);
    __m256d dk = _mm256_blendv_pd(_mm256_setzero_pd(), _mm256_set1_pd(-54.0),
                                  sub_mask);

    const __m256i bits = _mm256_castpd_si256(xs);
    const __m256i e64 = _mm256_srli_epi64(bits, 52);
    // Each 64-bit lane holds a small non-negative value; gather the low
    // 32-bit halves and widen to double.
    const __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    const __m128i e32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(e64, idx));
    const __m256d e = _mm256_cvtepi32_pd(e32);
    dk = _mm256_add_pd(dk, _mm256_sub_pd(e, _mm256_set1_pd(1023.0)));

    const __m256i mant = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
        _mm256_set1_epi64x(0x3FF0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant);
    const __m256d adj = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GE_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), adj);
    dk = _mm256_blendv_pd(dk, _mm256_add_pd(dk, _mm256_set1_pd(1.0)), adj);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d f = _mm256_sub_pd(m, one);
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
    const __m256d z = _mm256_mul_pd(s, s);
    const __m256d w = _mm256_mul_pd(z, z);
    __m256d t1 = _mm256_fmadd_pd(w, _mm256_set1_pd(kLg6), _mm256_set1_pd(kLg4));
    t1 = _mm256_fmadd_pd(w, t1, _mm256_set1_pd(kLg2));
    t1 = _mm256_mul_pd(w, t1);
    __m256d t2 = _mm256_fmadd_pd(w, _mm256_set1_pd(kLg7), _mm256_set1_pd(kLg5));
    t2 = _mm256_fmadd_pd(w, t2, _mm256_set1_pd(kLg3));
    t2 = _mm256_fmadd_pd(w, t2, _mm256_set1_pd(kLg1));
    t2 = _mm256_mul_pd(z, t2);
    const __m256d rr = _mm256_add_pd(t1, t2);
    const __m256d hfsq = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(0.5), f), f);

    const __m256d u2 = _mm256_mul_pd(s, _mm256_add_pd(hfsq, rr));
    const __m256d u3 = _mm256_mul_pd(dk, _mm256_set1_pd(kLn2Lo));
    const __m256d u5 = _mm256_sub_pd(hfsq, _mm256_add_pd(u2, u3));
    const __m256d u6 = _mm256_sub_pd(u5, f);
    __m256d res = _mm256_sub_pd(_mm256_mul_pd(dk, _mm256_set1_pd(kLn2Hi)), u6);

    const __m256d inf = _mm256_set1_pd(__builtin_inf());
    const __m256d nan = _mm256_set1_pd(__builtin_nan(""));
    const __m256d zero_mask = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_EQ_OQ);
    const __m256d neg_mask = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
    const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
    const __m256d inf_mask = _mm256_cmp_pd(x, inf, _CMP_EQ_OQ);
    res = _mm256_blendv_pd(res, _mm256_sub_pd(_mm256_setzero_pd(), inf), zero_mask);
    res = _mm256_blendv_pd(res, nan, _mm256_or_pd(neg_mask, nan_mask));
    res = _mm256_blendv_pd(res, inf, inf_mask);
    return res;
}

inline __m256d entropy4(__m256d p) {
    const __m256d l = log4(p);
    __m256d h = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(p, l));
    const __m256d le_zero = _mm256_cmp_pd(p, _mm256_setzero_pd(), _CMP_LE_OQ);
    h = _mm256_blendv_pd(h, _mm256_setzero_pd(), le_zero);
    return h;
}

template <typename Block>
void run_blocked(const double* x, double* out, std::size_t n, Block block,
                 void (*tail_fn)(const double*, double*, std::size_t)) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, block(_mm256_loadu_pd(x + i)));
    if (i < n) tail_fn(x + i, out + i, n - i);
}

}  // namespace

void exp_span_avx2(const double* x, double* out, std::size_t n) {
    run_blocked(x, out, n, [](__m256d v) { return exp4(v); }, exp_span_scalar);
}

void log_span_avx2(const double* x, double* out, std::size_t n) {
    run_blocked(x, out, n, [](__m256d v) { return log4(v); }, log_span_scalar);
}

void entropy_span_avx2(const double* p, double* out, std::size_t n) {
    run_blocked(p, out, n, [](__m256d v) { return entropy4(v); },
                entropy_span_scalar);
}

bool avx2_compiled_in() { return true; }

}  // namespace itad::simd::detail

#else  // !ITAD_BUILD_AVX2

namespace itad::simd::detail {

void exp_span_avx2(const double* x, double* out, std::size_t n) {
    exp_span_scalar(x, out, n);
}
void log_span_avx2(const double* x, double* out, std::size_t n) {
    log_span_scalar(x, out, n);
}
void entropy_span_avx2(const double* p, double* out, std::size_t n) {
    entropy_span_scalar(p, out, n);
}
bool avx2_compiled_in() { return false; }

}  // namespace itad::simd::detail

#endif

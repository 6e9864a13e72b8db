#pragma once

#include <cstddef>
#include <span>

#include "itad/simd/caps.hpp"

// Elementwise vector math used by the grid solvers and batched flux
// evaluation. Two variants exist for every kernel: a scalar reference and
// an AVX2 implementation of the *same* arithmetic (identical operation
// order, explicit fma), so the two backends produce bit-identical results.
// The active variant is selected at runtime (see caps.hpp) and the
// equivalence is asserted by the test suite.
namespace itad::simd {

// out[i] = exp(x[i])
void exp_span(std::span<const double> x, std::span<double> out);

// out[i] = log(x[i]); x>0 expected (0 -> -inf, negative -> NaN)
void log_span(std::span<const double> x, std::span<double> out);

// out[i] = p[i] * log(1/p[i]) with the limit value 0 at p in {0,1}
void entropy_span(std::span<const double> p, std::span<double> out);

namespace detail {
// Scalar reference kernels (always available; used for loop remainders).
void exp_span_scalar(const double* x, double* out, std::size_t n);
void log_span_scalar(const double* x, double* out, std::size_t n);
void entropy_span_scalar(const double* p, double* out, std::size_t n);
// AVX2 variants; compiled only when the toolchain supports -mavx2 and
// never called unless the CPU supports it.
void exp_span_avx2(const double* x, double* out, std::size_t n);
void log_span_avx2(const double* x, double* out, std::size_t n);
void entropy_span_avx2(const double* p, double* out, std::size_t n);
bool avx2_compiled_in();
}  // namespace detail

}  // namespace itad::simd

#include "itad/simd/vmath.hpp"

#include <cassert>

namespace itad::simd {

namespace {

using SpanFn = void (*)(const double*, double*, std::size_t);

SpanFn pick(SpanFn scalar_fn, SpanFn avx2_fn) {
    return active_backend() == Backend::avx2 ? avx2_fn : scalar_fn;
}

}  // namespace

void exp_span(std::span<const double> x, std::span<double> out) {
    assert(x.size() == out.size());
    static const SpanFn fn = pick(detail::exp_span_scalar, detail::exp_span_avx2);
    fn(x.data(), out.data(), x.size());
}

void log_span(std::span<const double> x, std::span<double> out) {
    assert(x.size() == out.size());
    static const SpanFn fn = pick(detail::log_span_scalar, detail::log_span_avx2);
    fn(x.data(), out.data(), x.size());
}

void entropy_span(std::span<const double> p, std::span<double> out) {
    assert(p.size() == out.size());
    static const SpanFn fn =
        pick(detail::entropy_span_scalar, detail::entropy_span_avx2);
    fn(p.data(), out.data(), p.size());
}

}  // namespace itad::simd

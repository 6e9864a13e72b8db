#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "itad/simd/caps.hpp"
#include "itad/simd/vmath.hpp"

using namespace itad;

namespace {

// ulp distance between finite doubles of the same sign.
std::int64_t ulp_diff(double a, double b) {
    const auto ia = std::bit_cast<std::int64_t>(a);
    const auto ib = std::bit_cast<std::int64_t>(b);
    return std::abs(ia - ib);
}

std::vector<double> exp_inputs() {
    std::vector<double> xs = {0.0,    -0.0,   1.0,     -1.0,   -5.0,
                              -0.719, 0.5,    -700.0,  700.0,  -745.0,
                              -746.0, 710.0,  1e-300,  -1e-12, 345.678};
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> wide(-700.0, 700.0);
    std::uniform_real_distribution<double> narrow(-60.0, 1.0);
    for (int i = 0; i < 4000; ++i) xs.push_back(wide(gen));
    for (int i = 0; i < 4000; ++i) xs.push_back(narrow(gen));
    return xs;
}

std::vector<double> log_inputs() {
    std::vector<double> xs = {1.0,  0.5,   2.0,    1e-300, 1e300,
                              0.1,  1e-12, 0.9999, 1.0001, 4.9406564584124654e-324};
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unit(1e-12, 1.0);
    std::uniform_real_distribution<double> wide(0.0, 1e6);
    for (int i = 0; i < 4000; ++i) xs.push_back(unit(gen));
    for (int i = 0; i < 4000; ++i) xs.push_back(wide(gen));
    return xs;
}

}  // namespace

TEST_CASE("vector exp matches std::exp to a few ulp") {
    const auto xs = exp_inputs();
    std::vector<double> out(xs.size());
    simd::exp_span(xs, out);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double want = std::exp(xs[i]);
        if (want == 0.0 || std::isinf(want)) {
            CHECK(out[i] == want);
        } else {
            INFO("x = ", xs[i]);
            CHECK(ulp_diff(out[i], want) <= 4);
        }
    }
}

TEST_CASE("vector exp special values") {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> xs = {1e308, -1e308, inf, -inf,
                              std::numeric_limits<double>::quiet_NaN()};
    std::vector<double> out(xs.size());
    simd::exp_span(xs, out);
    CHECK(out[0] == inf);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == inf);
    CHECK(out[3] == 0.0);
    CHECK(std::isnan(out[4]));
}

TEST_CASE("vector log matches std::log to a few ulp") {
    const auto xs = log_inputs();
    std::vector<double> out(xs.size());
    simd::log_span(xs, out);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double want = std::log(xs[i]);
        INFO("x = ", xs[i]);
        if (xs[i] == 1.0) {
            CHECK(out[i] == 0.0);
        } else {
            CHECK(ulp_diff(out[i], want) <= 4);
        }
    }
}

TEST_CASE("vector log special values") {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> xs = {0.0, -1.0, inf, std::numeric_limits<double>::quiet_NaN()};
    std::vector<double> out(xs.size());
    simd::log_span(xs, out);
    CHECK(out[0] == -inf);
    CHECK(std::isnan(out[1]));
    CHECK(out[2] == inf);
    CHECK(std::isnan(out[3]));
}

TEST_CASE("entropy endpoints and interior values") {
    std::vector<double> ps = {0.0, 1.0, 0.5, 1.0 / std::exp(1.0), 1e-300, 0.9999999};
    std::vector<double> out(ps.size());
    simd::entropy_span(ps, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
    // maximum of p log(1/p) is 1/e at p = 1/e
    CHECK(out[3] == doctest::Approx(1.0 / std::exp(1.0)).epsilon(1e-15));
    for (double h : out) CHECK(h >= 0.0);
}

TEST_CASE("scalar and AVX2 backends agree bit-for-bit") {
    if (!(simd::detail::avx2_compiled_in() && simd::cpu_has_avx2_fma())) {
        MESSAGE("AVX2 unavailable; equivalence check skipped");
        return;
    }
    auto xs = exp_inputs();
    const auto ls = log_inputs();
    xs.insert(xs.end(), ls.begin(), ls.end());
    xs.push_back(std::numeric_limits<double>::quiet_NaN());
    xs.push_back(std::numeric_limits<double>::infinity());
    xs.push_back(-std::numeric_limits<double>::infinity());

    std::vector<double> a(xs.size()), b(xs.size());
    const auto check_bits = [&](const std::vector<double>& u,
                                const std::vector<double>& v) {
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (std::isnan(u[i]) && std::isnan(v[i])) continue;  // payload-free
            if (std::bit_cast<std::uint64_t>(u[i]) !=
                std::bit_cast<std::uint64_t>(v[i])) {
                ++mismatches;
                INFO("x = ", xs[i], " scalar = ", u[i], " avx2 = ", v[i]);
                CHECK(u[i] == v[i]);
                if (mismatches > 3) return;
            }
        }
        CHECK(mismatches == 0);
    };

    simd::detail::exp_span_scalar(xs.data(), a.data(), xs.size());
    simd::detail::exp_span_avx2(xs.data(), b.data(), xs.size());
    check_bits(a, b);

    simd::detail::log_span_scalar(xs.data(), a.data(), xs.size());
    simd::detail::log_span_avx2(xs.data(), b.data(), xs.size());
    check_bits(a, b);

    simd::detail::entropy_span_scalar(xs.data(), a.data(), xs.size());
    simd::detail::entropy_span_avx2(xs.data(), b.data(), xs.size());
    check_bits(a, b);
}

TEST_CASE("backend dispatch resolves") {
    const simd::Backend b = simd::active_backend();
    CHECK((b == simd::Backend::scalar || b == simd::Backend::avx2));
}

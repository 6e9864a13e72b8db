#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "itad/errors.hpp"
#include "itad/fluxes.hpp"

using namespace itad;

namespace {

const CountingLaw kPoisson50 = CountingLaw::poisson(50);
const Kernel kDecentral = Kernel::decentral(0.1);

std::vector<CountingLaw> test_laws() {
    return {CountingLaw::poisson(50), CountingLaw::binomial(20, 0.3),
            CountingLaw::negative_binomial(3, 0.5), CountingLaw::dirac(7)};
}

std::vector<Kernel> test_kernels() {
    return {Kernel::central(43.4997), Kernel::subcentral(3.0057),
            Kernel::decentral(0.1), Kernel::local(0.5, 0.105573)};
}

}  // namespace

TEST_CASE("threshold type") {
    CHECK(Threshold(3).value() == 3);
    CHECK(Threshold(3).str() == "3");
    CHECK(Threshold::infinity().is_infinite());
    CHECK(Threshold::infinity().str() == "inf");
    CHECK_THROWS_AS(Threshold(0), ConfigError);
}

TEST_CASE("degree stats closed forms") {
    // Poisson + constant kernel: corr = p off the diagonal
    const auto s1 = degree_stats(kPoisson50, kDecentral, 0.2, 0.8);
    CHECK(s1.mean_x == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(s1.variance_x == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(s1.correlation == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(!s1.degenerate);

    // fixed count decorrelates the field
    const auto s2 = degree_stats(CountingLaw::dirac(50), kDecentral, 0.2, 0.8);
    CHECK(std::abs(s2.correlation) <= 1e-14);
    CHECK(s2.variance_x == doctest::Approx(50 * 0.1 * 0.9).epsilon(1e-13));

    // c=50, delta^2=25 via Binomial(100, 0.5): corr = 2.5/47.5
    const auto s3 = degree_stats(CountingLaw::binomial(100, 0.5), kDecentral, 0.2, 0.8);
    CHECK(s3.correlation == doctest::Approx(2.5 / 47.5).epsilon(1e-12));

    CHECK(degree_stats(kPoisson50, kDecentral, 0.4, 0.4).correlation == 1.0);
}

TEST_CASE("degenerate variance reports zero correlation with a flag") {
    const auto s = degree_stats(kPoisson50, Kernel::decentral(0.0), 0.2, 0.8);
    CHECK(s.degenerate);
    CHECK(s.correlation == 0.0);
    const auto d = degree_stats(CountingLaw::dirac(50), Kernel::central(5.0), 0.0, 0.0);
    // central marginal at 0 is 1, so a Dirac count has zero variance there
    CHECK(d.degenerate);
}

TEST_CASE("induction probability anchors") {
    // oracle values from the Poisson(5) series (see test_counting)
    const double with_self = induction_p(kPoisson50, kDecentral, 8, 0.5, true);
    CHECK(with_self == doctest::Approx(0.14381616036571268).epsilon(1e-12));
    CHECK(std::abs(with_self - 0.1438) <= 5e-4);
    const double no_self = induction_p(kPoisson50, kDecentral, 8, 0.5, false);
    CHECK(no_self == doctest::Approx(0.13337167407000727).epsilon(1e-12));
    // empty thinning: marginal 0 means no interactions at all
    CHECK(induction_p(kPoisson50, Kernel::decentral(0.0), 1, 0.5, false) == 0.0);
    CHECK_THROWS_AS((void)induction_p(kPoisson50, kDecentral, 0, 0.5, true),
                    ConfigError);
}

TEST_CASE("activation flux closed form for the unit threshold") {
    // q_1(x,u) = 1 - 0.9 e^{-5u} for Poisson(50) + constant 0.1, self on
    for (int i = 0; i <= 20; ++i) {
        const double u = double(i) / 20.0;
        const double want = 1.0 - 0.9 * std::exp(-5.0 * u);
        CHECK(std::abs(flux_q(kPoisson50, kDecentral, Threshold(1), 0.3, u, true) -
                       want) <= 5e-14);
    }
    CHECK(flux_q(kPoisson50, kDecentral, Threshold(1), 0.3, 0.1438, true) ==
          doctest::Approx(0.5614846734941152).epsilon(1e-12));
}

TEST_CASE("infinite thresholds give exactly zero flux") {
    for (const auto& law : test_laws()) {
        for (const auto& kernel : test_kernels()) {
            CHECK(flux_q(law, kernel, Threshold::infinity(), 0.3, 0.7, true) == 0.0);
            CHECK(flux_r(law, kernel, Threshold::infinity(), 0.3, 0.7, true) == 0.0);
            CHECK(mean_flux_q(law, kernel, Threshold::infinity(), 0.7, true) == 0.0);
        }
    }
}

TEST_CASE("zero activation leaves only the self term") {
    for (const auto& law : test_laws()) {
        for (const auto& kernel : test_kernels()) {
            const double fxx = kernel.eval(0.3, 0.3);
            CHECK(flux_q(law, kernel, Threshold(1), 0.3, 0.0, true) == fxx);
            CHECK(flux_q(law, kernel, Threshold(1), 0.3, 0.0, false) == 0.0);
        }
    }
}

TEST_CASE("flux monotonicity in activation and threshold") {
    for (const auto& law : test_laws()) {
        for (const auto& kernel : test_kernels()) {
            for (std::int64_t l = 1; l <= 3; ++l) {
                double prev_q = -1.0, prev_r = 2.0;
                for (int i = 0; i <= 100; ++i) {
                    const double u = double(i) / 100.0;
                    const double q = flux_q(law, kernel, Threshold(l), 0.37, u, true);
                    const double r = flux_r(law, kernel, Threshold(l), 0.37, u, true);
                    CHECK(q >= prev_q);
                    CHECK(r <= prev_r);
                    prev_q = q;
                    prev_r = r;
                    // tail monotone in threshold, self term shifted consistently
                    const double q_next =
                        flux_q(law, kernel, Threshold(l + 1), 0.37, u, true);
                    CHECK(q_next <= q + 1e-15);
                }
            }
        }
    }
}

TEST_CASE("activation and deactivation fluxes coincide at one half") {
    for (const auto& law : test_laws()) {
        for (const auto& kernel : test_kernels()) {
            for (std::int64_t l = 1; l <= 3; ++l) {
                const double q = flux_q(law, kernel, Threshold(l), 0.37, 0.5, true);
                const double r = flux_r(law, kernel, Threshold(l), 0.37, 0.5, true);
                CHECK(q == r);  // thinning factors coincide exactly
            }
        }
    }
}

TEST_CASE("mean flux anchors and quadrature cross-check") {
    const double g8 = mean_induction(kPoisson50, kDecentral, 8, true);
    CHECK(std::abs(g8 - 0.1438) <= 5e-4);

    // spatially varying kernel: 64-node rule vs a dense trapezoid oracle
    const Kernel sub = Kernel::subcentral(3.0057);
    const double gl = mean_induction(kPoisson50, sub, 8, true);
    const int n = 10'000;
    double trap = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = double(i) / double(n);
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        trap += w * induction_p(kPoisson50, sub, 8, x, true);
    }
    trap /= double(n);
    CHECK(gl > 0.0);
    CHECK(gl < 1.0);
    CHECK(std::abs(gl - trap) <= 1e-8);

    // local kernel integrates piecewise across its kinks
    const Kernel loc = Kernel::local(0.5, 0.105573);
    const double gl2 = mean_induction(kPoisson50, loc, 2, true);
    double trap2 = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = double(i) / double(n);
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        trap2 += w * induction_p(kPoisson50, loc, 2, x, true);
    }
    trap2 /= double(n);
    CHECK(std::abs(gl2 - trap2) <= 1e-6);
}

TEST_CASE("batched flux equals the pointwise path") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& law : test_laws()) {
        for (const auto& kernel : test_kernels()) {
            const std::size_t n = 37;
            std::vector<double> xs(n), nu_fx(n), fxx(n), us(n), out(n);
            for (std::size_t j = 0; j < n; ++j) {
                xs[j] = unit(gen);
                nu_fx[j] = kernel.marginal(xs[j]);
                fxx[j] = kernel.eval(xs[j], xs[j]);
                us[j] = unit(gen);
            }
            for (std::int64_t l : {1, 2, 3, 8}) {
                flux_q_batch(law, Threshold(l), nu_fx, fxx, us, true, out);
                for (std::size_t j = 0; j < n; ++j) {
                    const double want =
                        flux_q(law, kernel, Threshold(l), xs[j], us[j], true);
                    INFO(kernel.family_name(), " l = ", l);
                    CHECK(std::abs(out[j] - want) <= 5e-14);
                }
                flux_r_batch(law, Threshold(l), nu_fx, fxx, us, true, out);
                for (std::size_t j = 0; j < n; ++j) {
                    const double want =
                        flux_r(law, kernel, Threshold(l), xs[j], us[j], true);
                    CHECK(std::abs(out[j] - want) <= 5e-14);
                }
            }
        }
    }
}

TEST_CASE("flux validity pre-check") {
    FluxSpec ok;
    ok.k = 8;
    ok.l = Threshold(1);
    ok.m = Threshold(1);
    CHECK_NOTHROW(validate_flux(kPoisson50, kDecentral, ok));

    FluxSpec overloaded = ok;
    overloaded.alpha = 2.0;
    CHECK_THROWS_AS(validate_flux(kPoisson50, kDecentral, overloaded), ConfigError);

    FluxSpec forced = ok;
    forced.l = Threshold::infinity();
    forced.m = Threshold::infinity();
    forced.a = 1.0;
    forced.b = 0.3;
    CHECK_NOTHROW(validate_flux(kPoisson50, kDecentral, forced));
    forced.a = 1.1;
    CHECK_THROWS_AS(validate_flux(kPoisson50, kDecentral, forced), ConfigError);

    FluxSpec bad = ok;
    bad.a = -0.5;
    CHECK_THROWS_AS(validate_flux(kPoisson50, kDecentral, bad), ConfigError);
}

TEST_CASE("effective fluxes apply overloading and forcing") {
    FluxSpec spec;
    spec.l = Threshold(1);
    spec.m = Threshold(2);
    spec.alpha = 0.5;
    spec.a = 0.1;
    spec.beta = 0.25;
    spec.b = 0.05;
    const double q = flux_q(kPoisson50, kDecentral, spec.l, 0.3, 0.4, true);
    const double r = flux_r(kPoisson50, kDecentral, spec.m, 0.3, 0.4, true);
    CHECK(effective_q(kPoisson50, kDecentral, spec, 0.3, 0.4) ==
          doctest::Approx(0.5 * q + 0.1).epsilon(1e-15));
    CHECK(effective_r(kPoisson50, kDecentral, spec, 0.3, 0.4) ==
          doctest::Approx(0.25 * r + 0.05).epsilon(1e-15));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "itad/errors.hpp"
#include "itad/lambertw.hpp"
#include "itad/orbits.hpp"

using namespace itad;

namespace {

OrbitConfig decentral_config() {
    OrbitConfig oc{CountingLaw::poisson(50), Kernel::decentral(0.1)};
    oc.l = Threshold(1);
    oc.xi0 = 0.14381616036571268;
    oc.n_steps = 50;
    return oc;
}

}  // namespace

TEST_CASE("lambert w0 inverts w e^w") {
    for (double x : {0.0, 1e-6, 0.5, 1.0, std::exp(1.0), 10.0, 448.254, 1e6, 1e12}) {
        const double w = lambert_w0(x);
        CHECK(w * std::exp(w) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)lambert_w0(-0.5), std::domain_error);
}

TEST_CASE("increasing orbit: first step and saturation") {
    OrbitConfig oc = decentral_config();
    const OrbitTrace tr = orbit(oc);
    // hand step via the unit-threshold closed form
    const double q0 = 1.0 - 0.9 * std::exp(-5.0 * oc.xi0);
    CHECK(tr.xi[1] == doctest::Approx(oc.xi0 + q0 * (1.0 - oc.xi0)).epsilon(1e-13));
    CHECK(std::abs(tr.xi[1] - 0.62443) <= 1e-3);
    CHECK(1.0 - tr.xi.back() <= 1e-6);
    for (std::size_t i = 1; i < tr.xi.size(); ++i) CHECK(tr.xi[i] >= tr.xi[i - 1]);
}

TEST_CASE("infinite threshold freezes the orbit") {
    OrbitConfig oc = decentral_config();
    oc.l = Threshold::infinity();
    const OrbitTrace tr = orbit(oc);
    for (double v : tr.xi) CHECK(v == oc.xi0);
}

TEST_CASE("sis reduction: exact small steps") {
    // Dirac(1) + constant kernel beta=1, l=1, r=1, no self interaction:
    // xi' = xi (1 - xi); from 1/2 the first iterates are 1/4, 3/16.
    OrbitConfig oc{CountingLaw::dirac(1), Kernel::decentral(1.0)};
    oc.l = Threshold(1);
    oc.r = 1.0;
    oc.self_interaction = false;
    oc.xi0 = 0.5;
    oc.n_steps = 2;
    const OrbitTrace tr = orbit(oc);
    CHECK(tr.xi[1] == 0.25);
    CHECK(tr.xi[2] == 0.1875);
}

TEST_CASE("sis equivalence within 1e-15 per step") {
    const double beta = 0.7, r = 0.3;
    OrbitConfig oc{CountingLaw::dirac(1), Kernel::decentral(beta)};
    oc.l = Threshold(1);
    oc.r = r;
    oc.self_interaction = false;
    oc.xi0 = 0.2;
    oc.n_steps = 100;
    const OrbitTrace tr = orbit(oc);
    for (std::size_t n = 0; n + 1 < tr.xi.size(); ++n) {
        const double xi = tr.xi[n];
        const double ref = xi + beta * xi * (1.0 - xi) - r * xi;
        CHECK(std::abs(tr.xi[n + 1] - ref) <= 1e-15);
    }
}

TEST_CASE("logistic map with full deactivation is exact") {
    const double beta = 0.9;
    OrbitConfig oc{CountingLaw::dirac(1), Kernel::decentral(beta)};
    oc.l = Threshold(1);
    oc.r = 1.0;
    oc.self_interaction = false;
    oc.xi0 = 0.31;
    oc.n_steps = 50;
    const OrbitTrace tr = orbit(oc);
    double x = oc.xi0;
    for (std::size_t n = 1; n < tr.xi.size(); ++n) {
        x = beta * x * (1.0 - x);
        CHECK(tr.xi[n] == x);  // bit-for-bit
    }
}

TEST_CASE("renormalized bernoulli map is the logistic-4 map") {
    // Dirac(1) + constant kernel 1/2, l=1, no self term: the one-step map
    // sup is p/4, so renormalization scales it to exactly 4 u (1-u).
    OrbitConfig oc{CountingLaw::dirac(1), Kernel::decentral(0.5)};
    oc.l = Threshold(1);
    oc.self_interaction = false;
    oc.renormalize = true;
    oc.xi0 = 0.303;
    oc.n_steps = 50;
    const ChaoticOrbit co = chaotic_orbit(oc);
    CHECK(co.wp == 8.0);
    double x = oc.xi0;
    double max_err = 0.0;
    for (std::size_t n = 1; n < co.trace.xi.size(); ++n) {
        x = 4.0 * x * (1.0 - x);
        max_err = std::max(max_err, std::abs(co.trace.xi[n] - x));
    }
    CHECK(max_err <= 1e-12);
}

TEST_CASE("chaos factor matches the product-log closed form") {
    const auto cf = chaos_factor(CountingLaw::poisson(50), Kernel::decentral(0.1),
                                 Threshold(1), true);
    CHECK(std::abs(cf.wp - 1.7849) <= 1e-3);
    REQUIRE(cf.closed_form.has_value());
    CHECK(std::abs(cf.wp - *cf.closed_form) <= 1e-9);
    CHECK(cf.u_star == doctest::Approx(0.2834).epsilon(1e-2));
    CHECK_THROWS_AS((void)chaos_factor(CountingLaw::poisson(50),
                                       Kernel::decentral(0.1),
                                       Threshold::infinity(), true),
                    NumericError);
}

TEST_CASE("renormalized map peaks at one over the sample grid") {
    OrbitConfig oc = decentral_config();
    oc.renormalize = true;
    oc.n_steps = 10;
    const ChaoticOrbit co = chaotic_orbit(oc);
    double peak = 0.0;
    for (double v : co.map.image) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        peak = std::max(peak, v);
    }
    CHECK(std::abs(peak - 1.0) <= 1e-6);
    CHECK(co.map.u.size() == 1001);
}

TEST_CASE("annihilation without renormalization converges monotonically") {
    OrbitConfig oc = decentral_config();
    oc.r = 1.0;
    oc.n_steps = 400;
    const OrbitTrace tr = orbit(oc);
    CHECK(tr.converged);
    REQUIRE(tr.fixed_point.has_value());
    CHECK(*tr.fixed_point > 0.2);
    CHECK(*tr.fixed_point < 0.7);
}

TEST_CASE("fixed point survives complete deactivation at low thresholds") {
    OrbitConfig oc = decentral_config();
    const auto entries = fixed_point_sweep(oc, SweepParameter::r, {1.0}, false);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].converged);
    CHECK(entries[0].fixed_point > 0.2);

    OrbitConfig oc2 = decentral_config();
    oc2.l = Threshold(2);
    const auto e2 = fixed_point_sweep(oc2, SweepParameter::r, {1.0}, false);
    CHECK(e2[0].fixed_point > 0.05);
}

TEST_CASE("cold sweep exhibits the jump near r = 0.292") {
    OrbitConfig oc = decentral_config();
    oc.l = Threshold(3);
    std::vector<double> values;
    for (int i = 0; i <= 15; ++i) values.push_back(0.285 + 0.001 * double(i));
    const auto entries = fixed_point_sweep(oc, SweepParameter::r, values, false);
    double max_jump = 0.0;
    double jump_at = 0.0;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        const double d = std::abs(entries[i].fixed_point - entries[i - 1].fixed_point);
        if (d > max_jump) {
            max_jump = d;
            jump_at = entries[i - 1].value;
        }
    }
    CHECK(max_jump > 0.1);
    CHECK(jump_at >= 0.285);
    CHECK(jump_at <= 0.300);
}

TEST_CASE("warm sweeps up and down disagree on an interval") {
    OrbitConfig oc = decentral_config();
    oc.l = Threshold(3);
    std::vector<double> values;
    for (int i = 0; i <= 38; ++i) values.push_back(0.02 + 0.01 * double(i));
    const auto up = fixed_point_sweep(oc, SweepParameter::r, values, true);
    std::vector<double> rev(values.rbegin(), values.rend());
    auto down_rev = fixed_point_sweep(oc, SweepParameter::r, rev, true);
    std::vector<SweepEntry> down(down_rev.rbegin(), down_rev.rend());

    double area = 0.0;
    int differ = 0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double gap_l = up[i].fixed_point - down[i].fixed_point;
        const double gap_r = up[i + 1].fixed_point - down[i + 1].fixed_point;
        area += 0.5 * (gap_l + gap_r) * (values[i + 1] - values[i]);
        if (std::abs(gap_l) > 1e-3) ++differ;
    }
    CHECK(differ > 0);
    CHECK(area > 0.0);
}

TEST_CASE("threshold-sequence sweep follows the hysteresis path") {
    OrbitConfig oc = decentral_config();
    oc.l = Threshold(1);
    oc.m = Threshold(1);
    const std::vector<double> seq{1, 2, 3, 2, 1};
    const auto entries = fixed_point_sweep(oc, SweepParameter::m, seq, true);
    REQUIRE(entries.size() == 5);
    for (const auto& e : entries) {
        CHECK(e.converged);
        CHECK(e.fixed_point >= 0.0);
        CHECK(e.fixed_point <= 1.0);
    }
}

TEST_CASE("slow flip-flop dynamics are not misreported as cycles") {
    // strong coupling with both unit thresholds oscillates around 1/2 with
    // damping barely below one; the scan must not call this a cycle
    OrbitConfig oc{CountingLaw::poisson(500), Kernel::decentral(0.1)};
    oc.l = Threshold(1);
    oc.m = Threshold(1);
    oc.xi0 = 0.3;
    oc.max_steps = 20'000;
    const auto entries = fixed_point_sweep(oc, SweepParameter::l, {1.0}, false);
    REQUIRE(entries.size() == 1);
    CHECK(!entries[0].converged);
    CHECK(entries[0].period == 0);
    CHECK(entries[0].fixed_point >= 0.0);
    CHECK(entries[0].fixed_point <= 1.0);
}

TEST_CASE("capped runs fall back to the window scan") {
    OrbitConfig oc = decentral_config();
    oc.l = Threshold(1);
    oc.max_steps = 3;  // force the cap; the window then sees convergence
    const auto entries = fixed_point_sweep(oc, SweepParameter::r, {0.2}, false);
    CHECK(entries[0].converged);
    CHECK(entries[0].period == 0);
}

TEST_CASE("deactivation orbit is dual to the activation orbit") {
    OrbitConfig oc = decentral_config();
    oc.n_steps = 50;
    const OrbitTrace tr = orbit(oc);
    // iterate the decay form xd' = xd - q(1-xd) xd directly
    double xd = 1.0 - oc.xi0;
    for (std::size_t n = 1; n < tr.xi.size(); ++n) {
        const double u = 1.0 - xd;
        const double q = mean_flux_q(oc.law, oc.kernel, oc.l, u, true);
        xd = xd - q * xd;
        CHECK(std::abs((1.0 - xd) - tr.xi[n]) <= 1e-12);
    }
}

TEST_CASE("iterations to tolerance") {
    OrbitConfig oc = decentral_config();
    const double eps = 0.1;
    std::vector<double> grid;
    for (int i = 1; i <= 99; ++i) grid.push_back(double(i) / 100.0);
    const auto res = iterations_to_tolerance(oc, eps, grid);
    REQUIRE(res.size() == grid.size());
    // already within tolerance: zero iterations
    const auto at = iterations_to_tolerance(oc, eps, {1.0 - eps / 2.0});
    CHECK(at[0].second == 0);
    // monotone: higher starting activation reaches tolerance no later
    for (std::size_t i = 1; i < res.size(); ++i)
        CHECK(res[i].second <= res[i - 1].second);
    // tighter tolerance needs at least as many steps
    const auto tight = iterations_to_tolerance(oc, 1e-3, grid);
    for (std::size_t i = 0; i < res.size(); ++i)
        CHECK(tight[i].second >= res[i].second);
}

TEST_CASE("mixed-mode validity is checked on the unit grid") {
    OrbitConfig oc = decentral_config();
    oc.s = 0.5;  // sup(nu(q)+s) well above 1
    CHECK_THROWS_AS(oc.validate(), ConfigError);
    oc.s = 0.001;
    CHECK_NOTHROW(oc.validate());
    oc.s.reset();
    oc.xi0 = 1.5;
    CHECK_THROWS_AS(oc.validate(), ConfigError);
}

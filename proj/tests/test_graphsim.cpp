#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <queue>
#include <vector>

#include "itad/errors.hpp"
#include "itad/fluxes.hpp"
#include "itad/graphsim.hpp"

using namespace itad;

namespace {

const CountingLaw kPoisson50 = CountingLaw::poisson(50);
const Kernel kDecentral = Kernel::decentral(0.1);

// Reachability oracle: vertices connected to the seed set through edges
// (self-loops carry no reach).
std::int64_t reachable_from_active(const PointSystem& sys) {
    const std::size_t n = sys.locations.size();
    std::vector<char> seen(n, 0);
    std::queue<std::size_t> frontier;
    for (std::size_t i = 0; i < n; ++i)
        if (sys.labels[i]) {
            seen[i] = 1;
            frontier.push(i);
        }
    while (!frontier.empty()) {
        const std::size_t i = frontier.front();
        frontier.pop();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && !seen[j] && sys.adjacency.get(i, j)) {
                seen[j] = 1;
                frontier.push(j);
            }
        }
    }
    std::int64_t total = 0;
    for (char c : seen) total += c;
    return total;
}

}  // namespace

TEST_CASE("identical seeds give identical realizations") {
    const PointSystem a = sample_graph(kPoisson50, kDecentral, 1234, 7);
    const PointSystem b = sample_graph(kPoisson50, kDecentral, 1234, 7);
    REQUIRE(a.count == b.count);
    CHECK(a.locations == b.locations);
    for (std::size_t i = 0; i < std::size_t(a.count); ++i)
        for (std::size_t j = 0; j < std::size_t(a.count); ++j)
            CHECK(a.adjacency.get(i, j) == b.adjacency.get(i, j));

    const PointSystem c = sample_graph(kPoisson50, kDecentral, 1234, 8);
    const PointSystem d = sample_graph(kPoisson50, kDecentral, 4321, 7);
    const bool differs = c.count != a.count || d.count != a.count ||
                         c.locations != a.locations || d.locations != a.locations;
    CHECK(differs);
}

TEST_CASE("adjacency is symmetric with sampled self-loops") {
    const PointSystem sys = sample_graph(kPoisson50, kDecentral, 99, 0);
    const std::size_t n = std::size_t(sys.count);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            CHECK(sys.adjacency.get(i, j) == sys.adjacency.get(j, i));
}

TEST_CASE("degenerate kernels: complete and empty graphs") {
    const PointSystem full = sample_graph(kPoisson50, Kernel::decentral(1.0), 5, 0);
    REQUIRE(full.count >= 1);
    for (std::size_t i = 0; i < std::size_t(full.count); ++i)
        CHECK(full.degree(i) == full.count);
    CHECK(count_active(full, 1) == full.count);

    const PointSystem empty = sample_graph(kPoisson50, Kernel::decentral(0.0), 5, 0);
    for (std::size_t i = 0; i < std::size_t(empty.count); ++i)
        CHECK(empty.degree(i) == 0);
    CHECK(count_active(empty, 1) == 0);
}

TEST_CASE("mean degree matches the closed form") {
    // E d = c nu(f_x) + f(x,x) with the self-loop contribution
    double sum = 0.0;
    std::int64_t points = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const PointSystem sys = sample_graph(kPoisson50, kDecentral, 2024, rep);
        for (std::size_t i = 0; i < std::size_t(sys.count); ++i)
            sum += double(sys.degree(i));
        points += sys.count;
    }
    const double mean = sum / double(points);
    CHECK(std::abs(mean - 5.0) <= 0.2);
    CHECK(std::abs(mean - 5.1) <= 0.1);
}

TEST_CASE("activation counts against the mean-field prediction") {
    // c nu(g_k) vs the sampled mean of V_k, within 3 standard errors, for
    // every kernel family at common mass 1/10.
    const std::vector<Kernel> kernels = {
        calibrate_kernel(Kernel::Family::central, {}, 0.1),
        calibrate_kernel(Kernel::Family::subcentral, {}, 0.1),
        kDecentral,
        calibrate_kernel(Kernel::Family::local, {{"q", 0.5}}, 0.1),
    };
    for (const auto& kernel : kernels) {
        const auto reps = run_replicates(kPoisson50, kernel, 8,
                                         Threshold::infinity(), 10'000, 7);
        const ReplicateSummary s = summarize(reps);
        const double want = 50.0 * mean_induction(kPoisson50, kernel, 8, true);
        const double se = std::sqrt(s.var_active / double(reps.size()));
        INFO(kernel.family_name(), " mean ", s.mean_active, " want ", want);
        CHECK(std::abs(s.mean_active - want) <= 3.0 * se);
    }
}

TEST_CASE("transduction reachability for the unit threshold") {
    for (int rep = 0; rep < 20; ++rep) {
        PointSystem sys = sample_graph(kPoisson50, kDecentral, 31, rep);
        induce_labels(sys, 8);
        const std::int64_t want = reachable_from_active(sys);
        const auto seq = simulate_transduction(sys, 1);
        CHECK(seq.back() == want);
        for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i] >= seq[i - 1]);
        CHECK(seq.back() <= sys.count);
    }
}

TEST_CASE("transduction terminal state is a fixed point") {
    PointSystem sys = sample_graph(kPoisson50, kDecentral, 77, 3);
    induce_labels(sys, 8);
    const auto seq = simulate_transduction(sys, 2);
    // no deactivated point may now see two active neighbours
    const std::size_t n = std::size_t(sys.count);
    for (std::size_t i = 0; i < n; ++i) {
        if (sys.labels[i]) continue;
        std::int64_t active_edges = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && sys.labels[j] && sys.adjacency.get(i, j)) ++active_edges;
        CHECK(active_edges < 2);
    }
    std::int64_t labelled_active = 0;
    for (auto v : sys.labels) labelled_active += v;
    CHECK(seq.back() == labelled_active);
}

TEST_CASE("all points initially active ends immediately") {
    PointSystem sys = sample_graph(kPoisson50, Kernel::decentral(1.0), 12, 0);
    induce_labels(sys, 1);  // complete graph: everyone has degree K >= 1
    const auto seq = simulate_transduction(sys, 2);
    REQUIRE(seq.size() == 1);
    CHECK(seq[0] == sys.count);
}

TEST_CASE("activation process endpoints and monotonicity") {
    PointSystem sys = sample_graph(kPoisson50, kDecentral, 55, 1);
    assign_toas(sys, 10.0, 55, 1);
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(10.0 * double(i) / 40.0);
    const auto vk = activation_process(sys, 3, grid);
    CHECK(vk.front() == 0);
    CHECK(vk.back() == count_active(sys, 3));
    for (std::size_t i = 1; i < vk.size(); ++i) CHECK(vk[i] >= vk[i - 1]);
    // t = 0 exactly: diffuse arrival times are almost surely positive
    const auto at0 = activation_process(sys, 1, {0.0});
    CHECK(at0[0] == 0);
}

TEST_CASE("deactivation counts") {
    PointSystem sys = sample_graph(kPoisson50, kDecentral, 404, 2);
    induce_labels(sys, 8);
    CHECK(count_deactivations(sys, 0.0, 404, 2) == 0);
    std::int64_t active = 0;
    for (auto v : sys.labels) active += v;
    CHECK(count_deactivations(sys, 1.0, 404, 2) == active);

    // aggregate mean: E R = c r xi_A
    double sum = 0.0;
    const int n = 4000;
    for (int rep = 0; rep < n; ++rep) {
        PointSystem s = sample_graph(kPoisson50, kDecentral, 11, rep);
        induce_labels(s, 8);
        sum += double(count_deactivations(s, 0.5, 11, rep));
    }
    const double want = 50.0 * 0.5 * mean_induction(kPoisson50, kDecentral, 8, true);
    CHECK(std::abs(sum / n - want) <= 0.15);
}

TEST_CASE("probe degree moments track the closed forms") {
    const auto m = probe_degree_mc(kPoisson50, kDecentral, 0.2, 0.8, 20'000, 42);
    const DegreeStats want = degree_stats(kPoisson50, kDecentral, 0.2, 0.8);
    CHECK(std::abs(m.mean_x - want.mean_x) <= 0.1);
    CHECK(std::abs(m.corr - want.correlation) <= 0.05);
    // variance within 3 SE; for a Poisson degree the fourth central moment
    // is lam(1 + 3 lam), so Var(s^2) ~ (mu4 - mu2^2)/n
    const double lam = want.variance_x;
    const double se_pois = std::sqrt((lam * (1.0 + 3.0 * lam) - lam * lam) / 20'000.0);
    CHECK(std::abs(m.var_x - want.variance_x) <= 3.0 * se_pois);

    // Dirac count: degrees are Binomial(50, 0.1), mu4 = npq(1 + 3(n-2)pq)
    const auto md =
        probe_degree_mc(CountingLaw::dirac(50), kDecentral, 0.2, 0.8, 20'000, 44);
    const DegreeStats wd = degree_stats(CountingLaw::dirac(50), kDecentral, 0.2, 0.8);
    const double npq = wd.variance_x;
    const double mu4 = npq * (1.0 + 3.0 * 48.0 * 0.1 * 0.9);
    const double se_dirac = std::sqrt((mu4 - npq * npq) / 20'000.0);
    CHECK(std::abs(md.var_x - wd.variance_x) <= 3.0 * se_dirac);

    // binomial law with reduced dispersion: corr = 2.5/47.5
    const auto law = CountingLaw::binomial(100, 0.5);
    const auto mb = probe_degree_mc(law, kDecentral, 0.2, 0.8, 50'000, 43);
    CHECK(std::abs(mb.corr - 2.5 / 47.5) <= 0.02);
}

TEST_CASE("replicate driver is deterministic across thread counts") {
    const auto a = run_replicates(kPoisson50, kDecentral, 8, Threshold(2), 200, 7, 1);
    const auto b = run_replicates(kPoisson50, kDecentral, 8, Threshold(2), 200, 7, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].count == b[i].count);
        CHECK(a[i].active == b[i].active);
        CHECK(a[i].iterations == b[i].iterations);
        CHECK(a[i].terminal == b[i].terminal);
    }
}

TEST_CASE("oversized realizations are rejected") {
    CHECK_THROWS_AS((void)sample_graph(CountingLaw::dirac(20000), kDecentral, 1, 0),
                    NumericError);
}

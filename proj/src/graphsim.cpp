#include "itad/graphsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <thread>

#include "itad/errors.hpp"

namespace itad {

void BitMatrix::resize(std::size_t n) {
    n_ = n;
    words_ = (n + 63) / 64;
    bits_.assign(n * words_, 0);
}

bool BitMatrix::get(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
}

void BitMatrix::set(std::size_t i, std::size_t j) {
    bits_[i * words_ + j / 64] |= std::uint64_t(1) << (j % 64);
}

std::int64_t BitMatrix::row_count(std::size_t i) const {
    std::int64_t acc = 0;
    const std::uint64_t* row = bits_.data() + i * words_;
    for (std::size_t w = 0; w < words_; ++w) acc += std::popcount(row[w]);
    return acc;
}

std::int64_t BitMatrix::row_count_masked(
    std::size_t i, const std::vector<std::uint64_t>& mask) const {
    std::int64_t acc = 0;
    const std::uint64_t* row = bits_.data() + i * words_;
    for (std::size_t w = 0; w < words_; ++w) acc += std::popcount(row[w] & mask[w]);
    return acc;
}

PointSystem sample_graph(const CountingLaw& law, const Kernel& kernel,
                         std::uint64_t seed, std::uint64_t replicate) {
    Philox rng(seed, stream_id(replicate, RngChannel::graph));

    PointSystem sys;
    sys.count = law.quantile(rng.next_uniform());
    if (sys.count > 10'000)
        throw NumericError("realized count " + std::to_string(sys.count) +
                           " exceeds the dense adjacency limit 10^4");

    const std::size_t n = std::size_t(sys.count);
    sys.locations.resize(n);
    for (double& x : sys.locations) x = rng.next_uniform();

    sys.adjacency.resize(n);
    const bool constant = kernel.spatially_constant();
    const double p_const = constant ? kernel.p() : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double p = constant
                                 ? p_const
                                 : kernel.eval(sys.locations[i], sys.locations[j]);
            if (rng.bernoulli(p)) {
                sys.adjacency.set(i, j);
                sys.adjacency.set(j, i);
            }
        }
    }
    sys.labels.assign(n, 0);
    return sys;
}

void assign_toas(PointSystem& system, double horizon, std::uint64_t seed,
                 std::uint64_t replicate) {
    if (!(horizon > 0.0)) throw ConfigError("TOA horizon must be positive");
    Philox rng(seed, stream_id(replicate, RngChannel::toa));
    system.toa_horizon = horizon;
    system.toas.resize(system.locations.size());
    for (double& t : system.toas) t = horizon * rng.next_uniform();
}

void induce_labels(PointSystem& system, std::int64_t k) {
    const std::size_t n = system.locations.size();
    system.labels.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (system.degree(i) >= k) system.labels[i] = 1;
}

std::int64_t count_active(const PointSystem& system, std::int64_t k) {
    if (k < 1) throw ConfigError("activation threshold k must be >= 1");
    std::int64_t v = 0;
    for (std::size_t i = 0; i < system.locations.size(); ++i)
        if (system.degree(i) >= k) ++v;
    return v;
}

std::vector<std::int64_t> simulate_transduction(PointSystem& system,
                                                std::int64_t l) {
    if (l < 1) throw ConfigError("transduction threshold l must be >= 1");
    const std::size_t n = system.locations.size();
    const std::size_t words = system.adjacency.words_per_row();

    std::vector<std::uint64_t> active_mask(words, 0);
    std::int64_t active = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (system.labels[i]) {
            active_mask[i / 64] |= std::uint64_t(1) << (i % 64);
            ++active;
        }
    }

    std::vector<std::int64_t> counts{active};
    std::vector<std::size_t> flips;
    while (true) {
        flips.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (system.labels[i]) continue;
            // Edges into currently active points; i itself is inactive, so
            // its self-loop is excluded by the mask automatically.
            if (system.adjacency.row_count_masked(i, active_mask) >= l)
                flips.push_back(i);
        }
        if (flips.empty()) break;
        for (std::size_t i : flips) {
            system.labels[i] = 1;
            active_mask[i / 64] |= std::uint64_t(1) << (i % 64);
        }
        active += std::int64_t(flips.size());
        counts.push_back(active);
    }
    return counts;
}

std::vector<std::int64_t> activation_process(const PointSystem& system,
                                             std::int64_t k,
                                             const std::vector<double>& time_grid) {
    if (system.toas.empty())
        throw ConfigError("activation_process requires sampled arrival times");
    const std::size_t n = system.locations.size();
    const std::size_t words = system.adjacency.words_per_row();

    std::vector<std::int64_t> out;
    out.reserve(time_grid.size());
    std::vector<std::uint64_t> arrived(words, 0);
    for (double t : time_grid) {
        std::fill(arrived.begin(), arrived.end(), 0);
        for (std::size_t i = 0; i < n; ++i)
            if (system.toas[i] <= t) arrived[i / 64] |= std::uint64_t(1) << (i % 64);
        std::int64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (system.toas[i] > t) continue;
            if (system.adjacency.row_count_masked(i, arrived) >= k) ++v;
        }
        out.push_back(v);
    }
    return out;
}

std::int64_t count_deactivations(const PointSystem& system, double r,
                                 std::uint64_t seed, std::uint64_t replicate) {
    if (!(r >= 0.0 && r <= 1.0))
        throw ConfigError("deactivation probability r must lie in [0,1]");
    Philox rng(seed, stream_id(replicate, RngChannel::label));
    std::int64_t count = 0;
    for (std::size_t i = 0; i < system.labels.size(); ++i)
        if (system.labels[i] && rng.bernoulli(r)) ++count;
    return count;
}

std::vector<Replicate> run_replicates(const CountingLaw& law,
                                      const Kernel& kernel, std::int64_t k,
                                      Threshold l, std::int64_t n,
                                      std::uint64_t seed, int threads) {
    if (n < 1) throw ConfigError("replicate count must be >= 1");
    std::vector<Replicate> out(static_cast<std::size_t>(n));

    const auto worker = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t rep = lo; rep < hi; ++rep) {
            PointSystem sys = sample_graph(law, kernel, seed, std::uint64_t(rep));
            Replicate& r = out[std::size_t(rep)];
            r.replicate = std::uint64_t(rep);
            r.count = sys.count;
            r.active = count_active(sys, k);
            induce_labels(sys, k);
            if (l.is_infinite()) {
                r.iterations = 0;
                r.terminal = r.active;
            } else {
                const auto seq = simulate_transduction(sys, l.value());
                r.iterations = std::int64_t(seq.size()) - 1;
                r.terminal = seq.back();
            }
        }
    };

    int nthreads = threads > 0 ? threads
                               : int(std::min<unsigned>(
                                     8, std::max<unsigned>(
                                            1, std::thread::hardware_concurrency())));
    nthreads = int(std::min<std::int64_t>(nthreads, n));
    if (nthreads <= 1) {
        worker(0, n);
    } else {
        std::vector<std::future<void>> futs;
        const std::int64_t chunk = (n + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const std::int64_t lo = t * chunk;
            const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, worker, lo, hi));
        }
        for (auto& f : futs) f.get();
    }
    return out;
}

ReplicateSummary summarize(const std::vector<Replicate>& reps) {
    ReplicateSummary s;
    const double n = double(reps.size());
    for (const auto& r : reps) {
        s.mean_active += double(r.active);
        s.mean_count += double(r.count);
    }
    s.mean_active /= n;
    s.mean_count /= n;
    double ss = 0.0;
    for (const auto& r : reps) {
        const double d = double(r.active) - s.mean_active;
        ss += d * d;
    }
    s.var_active = reps.size() > 1 ? ss / (n - 1.0) : 0.0;
    return s;
}

ProbeMoments probe_degree_mc(const CountingLaw& law, const Kernel& kernel,
                             double x, double y, std::int64_t n,
                             std::uint64_t seed) {
    if (n < 2) throw ConfigError("probe MC needs at least 2 replicates");
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::int64_t rep = 0; rep < n; ++rep) {
        Philox rng(seed, stream_id(std::uint64_t(rep), RngChannel::graph));
        const std::int64_t k = law.quantile(rng.next_uniform());
        std::int64_t dx = 0, dy = 0;
        for (std::int64_t i = 0; i < k; ++i) {
            const double xi = rng.next_uniform();
            if (rng.bernoulli(kernel.eval(x, xi))) ++dx;
            if (rng.bernoulli(kernel.eval(y, xi))) ++dy;
        }
        sx += double(dx);
        sy += double(dy);
        sxx += double(dx) * double(dx);
        syy += double(dy) * double(dy);
        sxy += double(dx) * double(dy);
    }
    const double dn = double(n);
    ProbeMoments m;
    m.mean_x = sx / dn;
    m.mean_y = sy / dn;
    m.var_x = (sxx - dn * m.mean_x * m.mean_x) / (dn - 1.0);
    m.var_y = (syy - dn * m.mean_y * m.mean_y) / (dn - 1.0);
    m.cov = (sxy - dn * m.mean_x * m.mean_y) / (dn - 1.0);
    m.corr = (m.var_x > 0.0 && m.var_y > 0.0)
                 ? m.cov / std::sqrt(m.var_x * m.var_y)
                 : 0.0;
    return m;
}

}  // namespace itad

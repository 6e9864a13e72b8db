#pragma once

#include <cstdint>
#include <vector>

#include "itad/counting.hpp"
#include "itad/fluxes.hpp"
#include "itad/kernels.hpp"
#include "itad/rng.hpp"

namespace itad {

// Symmetric adjacency with self-loops on the diagonal, packed 64 bits per
// word for popcount degree sums.
class BitMatrix {
public:
    void resize(std::size_t n);
    std::size_t size() const { return n_; }
    bool get(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j);
    // Number of set bits in row i (degree including the self-loop).
    std::int64_t row_count(std::size_t i) const;
    // Number of set bits of row i restricted to the given mask words.
    std::int64_t row_count_masked(std::size_t i,
                                  const std::vector<std::uint64_t>& mask) const;
    std::size_t words_per_row() const { return words_; }

private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

// One realization of the point system: thrown points, Bernoulli
// interactions (self-loops included), and activation labels.
struct PointSystem {
    std::int64_t count = 0;               // realized K
    std::vector<double> locations;        // iid uniform on [0,1]
    std::vector<double> toas;             // arrival times; empty unless sampled
    double toa_horizon = 0.0;
    std::vector<std::uint8_t> labels;     // 0 = deactivated, 1 = active
    BitMatrix adjacency;

    std::int64_t degree(std::size_t i) const { return adjacency.row_count(i); }
};

// Realize the point system: K by inverse-CDF on the counting pmf, locations
// iid uniform, one Bernoulli(f(X_i,X_j)) draw per unordered pair (i <= j).
// Deterministic in (seed, replicate). K above 10^4 is rejected (dense
// adjacency only; desk scale).
PointSystem sample_graph(const CountingLaw& law, const Kernel& kernel,
                         std::uint64_t seed, std::uint64_t replicate = 0);

// Assign iid Uniform[0,T] arrival times from the TOA stream.
void assign_toas(PointSystem& system, double horizon, std::uint64_t seed,
                 std::uint64_t replicate = 0);

// Label i active iff degree(i) >= k.
void induce_labels(PointSystem& system, std::int64_t k);

// V_k(G): number of vertices with degree >= k.
std::int64_t count_active(const PointSystem& system, std::int64_t k);

// Synchronous label cascade: a deactivated point flips once its edges into
// currently-active points reach l (its own self-loop never contributes).
// Returns cumulative active counts per iteration, first entry = initial.
std::vector<std::int64_t> simulate_transduction(PointSystem& system,
                                                std::int64_t l);

// V_k^t on the given time grid: degree counts restricted to points arrived
// by t; a point with T_i > t contributes degree 0.
std::vector<std::int64_t> activation_process(const PointSystem& system,
                                             std::int64_t k,
                                             const std::vector<double>& time_grid);

// Number of deactivations: each active point flagged with probability r
// (label stream).
std::int64_t count_deactivations(const PointSystem& system, double r,
                                 std::uint64_t seed, std::uint64_t replicate = 0);

// Replicated experiment driver (parallel over replicates, deterministic).
struct Replicate {
    std::uint64_t replicate = 0;
    std::int64_t count = 0;        // K
    std::int64_t active = 0;       // V_k
    std::int64_t iterations = 0;   // transduction rounds until fixed point
    std::int64_t terminal = 0;     // terminal active count
};

struct ReplicateSummary {
    double mean_active = 0.0;
    double var_active = 0.0;  // sample variance (n-1)
    double mean_count = 0.0;
};

std::vector<Replicate> run_replicates(const CountingLaw& law,
                                      const Kernel& kernel, std::int64_t k,
                                      Threshold l, std::int64_t n,
                                      std::uint64_t seed, int threads = 0);

ReplicateSummary summarize(const std::vector<Replicate>& reps);

// Monte-Carlo moments of the degree field probed at two fixed locations.
struct ProbeMoments {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    double cov = 0.0;
    double corr = 0.0;
};

ProbeMoments probe_degree_mc(const CountingLaw& law, const Kernel& kernel,
                             double x, double y, std::int64_t n,
                             std::uint64_t seed);

}  // namespace itad

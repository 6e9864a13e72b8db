#pragma once

#include <array>
#include <cstdint>

namespace itad {

// Philox4x64-10 counter-based generator. A stream is (key = {seed, stream},
// counter from 0); distinct streams are statistically independent, so
// sub-draws of one experiment (graph edges, labels, arrival times) are
// reproducible in isolation.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{seed, stream}, counter_{0, 0, 0, 0} {}

    std::uint64_t next_u64();

    // Uniform on [0,1) with 53 random bits.
    double next_uniform() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_uniform() < p; }

    // Raw block transform, exposed for known-answer tests.
    static std::array<std::uint64_t, 4> block(
        const std::array<std::uint64_t, 4>& counter,
        const std::array<std::uint64_t, 2>& key);

private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> buffer_{};
    int buffered_ = 0;
};

// Stream-id layout used throughout the Monte-Carlo drivers: one stream per
// (replicate, channel) pair.
enum class RngChannel : std::uint64_t { graph = 0, label = 1, toa = 2 };

inline std::uint64_t stream_id(std::uint64_t replicate, RngChannel channel) {
    return (replicate << 2) | std::uint64_t(channel);
}

}  // namespace itad

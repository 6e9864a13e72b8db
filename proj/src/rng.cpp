#include "itad/rng.hpp"

namespace itad {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = std::uint64_t(prod >> 64);
    lo = std::uint64_t(prod);
}

inline void round_once(std::array<std::uint64_t, 4>& c,
                       const std::array<std::uint64_t, 2>& k) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint64_t, 4> Philox::block(
    const std::array<std::uint64_t, 4>& counter,
    const std::array<std::uint64_t, 2>& key) {
    std::array<std::uint64_t, 4> c = counter;
    std::array<std::uint64_t, 2> k = key;
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        round_once(c, k);
    }
    return c;
}

std::uint64_t Philox::next_u64() {
    if (buffered_ == 0) {
        buffer_ = block(counter_, key_);
        buffered_ = 4;
        // 256-bit counter increment.
        if (++counter_[0] == 0)
            if (++counter_[1] == 0)
                if (++counter_[2] == 0) ++counter_[3];
    }
    return buffer_[4 - buffered_--];
}

}  // namespace itad

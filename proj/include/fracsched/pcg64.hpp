#pragma once

// PCG64 (XSL-RR 128/64, O'Neill 2014) with selectable stream, plus the
// bounded-integer draw the generator needs. std::uniform_int_distribution is
// not used anywhere: its output is implementation-defined and generated
// instances must be identical across standard libraries.

#include <cstdint>
#include <limits>

namespace fracsched {

class Pcg64 {
public:
    using result_type = std::uint64_t;

    explicit Pcg64(std::uint64_t seed, std::uint64_t stream = 0) {
        increment_ = (static_cast<unsigned __int128>(stream) << 1u) | 1u;
        state_ = 0;
        step();
        state_ += seed;
        step();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        step();
        const auto hi = static_cast<std::uint64_t>(state_ >> 64u);
        const auto lo = static_cast<std::uint64_t>(state_);
        const unsigned rot = static_cast<unsigned>(state_ >> 122u);
        const std::uint64_t x = hi ^ lo;
        return (x >> rot) | (x << ((64u - rot) & 63u));
    }

    /// Uniform integer in [0, bound); bound must be positive.
    /// Lemire's multiply-and-reject, unbiased.
    std::uint64_t below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64u);
    }

    bool coin() { return ((*this)() >> 63u) != 0; }

private:
    static constexpr unsigned __int128 kMultiplier =
        (static_cast<unsigned __int128>(0x2360ED051FC65DA4ULL) << 64u) | 0x4385DF649FCCF645ULL;

    void step() { state_ = state_ * kMultiplier + increment_; }

    unsigned __int128 state_;
    unsigned __int128 increment_;
};

/// Stream ids used when deriving generators from one seed. Adding a stream
/// never perturbs the draws of the existing ones.
namespace streams {
inline constexpr std::uint64_t kNodePlacement = 1;
inline constexpr std::uint64_t kSenderCoins = 2;
inline constexpr std::uint64_t kSweepSeeds = 3;
inline constexpr std::uint64_t kFixtureSearch = 4;
}  // namespace streams

/// SplitMix64 finaliser, used to fold sweep coordinates into a seed.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30u)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27u)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31u);
}

}  // namespace fracsched

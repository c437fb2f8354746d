#pragma once
#include <cstdint>

namespace qset {

// Splittable seeded PRNG built on the SplitMix64 mixing function
// (Steele, Lea, Flood 2014). The algorithm is fixed here so that a
// given seed replays the same sequence on every platform, which the
// reproducibility contract of the CLI depends on.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform over {0, ..., bound-1}, unbiased via rejection.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Derives an independent child stream from (seed, stream id).
    // Children of distinct ids never share state with the parent.
    Rng derive(std::uint64_t stream_id) const {
        std::uint64_t z = state_ ^ (0xA0761D6478BD642FULL * (stream_id + 1));
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return Rng(z ^ (z >> 31));
    }

private:
    std::uint64_t state_;
};

} // namespace qset

#pragma once

#include <cstdint>
#include <random>

namespace groupmac {

// Seeded 64-bit Mersenne Twister with portable draws. The std:: distributions
// are implementation-defined, so the few we need are written out here to
// keep outputs identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for (seed, stream); seed_seq mixing is fully specified
    // by the standard.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        Rng rng(0);
        rng.engine_.seed(seq);
        return rng;
    }

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace groupmac

#pragma once

#include <cstdint>

namespace structbo {

// xoshiro256++ with splitmix64 seeding. Self-contained so that traces are
// bit-reproducible across platforms and standard library versions (the
// standard does not pin down distribution implementations).
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi);

    // Standard normal via the polar method (one spare cached).
    double normal();

    // Uniform integer in [0, n); n must be positive.
    int uniform_int(int n);

    bool bernoulli(double p);

    // Independent deterministic substream for (seed, tag).
    static Rng stream(std::uint64_t seed, std::uint64_t tag);

private:
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace structbo

#ifndef DMSIM_RNG_HPP
#define DMSIM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace dmsim {

// xoshiro256** seeded through splitmix64. Hand-rolled so that streams are
// reproducible across standard libraries and platforms; std:: distributions
// are implementation-defined and would break the bit-determinism contract.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    // Derive an independent stream, e.g. per (seed, node) pair.
    static Rng fork(uint64_t seed, uint64_t stream) {
        uint64_t x = seed;
        uint64_t a = splitmix64(x);
        x ^= 0x9e3779b97f4a7c15ULL * (stream + 1);
        return Rng(a ^ splitmix64(x));
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, bound)
    uint64_t uniform_u64(uint64_t bound) {
        if (bound <= 1) return 0;
        // Lemire multiply-shift with rejection of the biased zone.
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * bound;
            if (static_cast<uint64_t>(m) >= threshold) return static_cast<uint64_t>(m >> 64);
        }
    }

    // uniform in [0, 1)
    double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform_double() < p; }

    // Geometric on {1, 2, ...} with the given mean, sampled by inversion.
    uint64_t geometric(double mean) {
        if (mean <= 1.0) return 1;
        double p = 1.0 / mean;
        double u = uniform_double();
        // 1 - u avoids log(0); result >= 1 by construction.
        double g = std::floor(std::log1p(-u) / std::log1p(-p));
        return 1 + static_cast<uint64_t>(g);
    }

    // Exponential with the given mean (used by queueing sanity tests).
    double exponential(double mean) {
        double u = uniform_double();
        return -mean * std::log1p(-u);
    }

private:
    static uint64_t splitmix64(uint64_t& x) {
        uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
};

} // namespace dmsim

#endif

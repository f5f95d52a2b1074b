#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ura {

// splitmix64 step, used for seed derivation only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic child-seed derivation: master seed + stream indices.
// Used to hand independent generator streams to trials/users so that
// results do not depend on worker count or evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = master;
    (void)splitmix64(s);
    s ^= a * 0xd6e8feb86659fd93ULL;
    (void)splitmix64(s);
    s ^= b * 0xa5a5a5a5a5a5a5a5ULL;
    return splitmix64(s);
}

// Wrapper around std::mt19937_64 with portable draw primitives.
// std::mt19937_64 output is bit-identical across platforms by the standard;
// the distributions below are implemented here because the standard library
// distribution objects are not portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform integer in [0, bound) via rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double real01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bit() { return (gen_() >> 63) != 0; }

    // Standard normal via Box-Muller (deterministic, pair-cached).
    double gauss() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1, u2;
        do {
            u1 = real01();
        } while (u1 <= 0.0);
        u2 = real01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace ura

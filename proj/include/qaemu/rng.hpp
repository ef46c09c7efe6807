#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace qaemu {

// All randomness in the library flows through this wrapper. The engine is
// std::mt19937_64 (bit-exact across platforms); variates are derived with
// the fixed recipes below instead of std::*_distribution, whose output is
// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // 53-bit mantissa draw in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    int spin() { return bernoulli(0.5) ? 1 : -1; }

    // Standard normal via Box-Muller, cosine branch. Two uniforms per call,
    // no cached state, so the draw sequence is a pure function of the seed.
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::mt19937_64 engine_;
};

namespace detail {

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : s) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace detail

// Derives a per-stage seed from a master seed and a stage tag, so toggling
// one pipeline stage never perturbs the random stream of another.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) {
    return detail::splitmix64(master ^ detail::fnv1a(stage));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view stage, std::uint64_t index) {
    return detail::splitmix64(derive_seed(master, stage) + 0x632be59bd9b4e019ull * (index + 1));
}

}  // namespace qaemu

#pragma once
// Seeded random streams. mt19937_64 supplies raw bits; every mapping to
// doubles or ranges is implemented here so draw sequences never depend on
// the standard library's distribution internals (which are
// implementation-defined and would break run reproducibility across
// toolchains).

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace pf {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

class RngStream {
public:
    RngStream() : gen_(0) {}
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // Independent named substream of a run seed. Streams derived with
    // distinct (tag, index) pairs are decorrelated, so consuming one
    // stream (e.g. radio draws) never perturbs another (e.g. mobility).
    static RngStream derive(std::uint64_t seed, std::string_view tag,
                            std::uint64_t index = 0) {
        return RngStream(splitmix64(seed ^ splitmix64(fnv1a64(tag) + 0x9e3779b9ULL * (index + 1))));
    }

    std::uint64_t bits() { return gen_(); }

    // Uniform double in [0, 1), 53-bit resolution.
    double u01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Uniform integer in [0, n). Rejection sampling keeps it exactly uniform.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = bits();
        while (x >= limit) x = bits();
        return x % n;
    }

    // Exponential with the given mean; inverse-CDF on u01.
    double exponential(double mean) { return -mean * std::log1p(-u01()); }

    bool bernoulli(double p) { return u01() < p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace pf

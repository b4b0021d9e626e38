#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace farmlink {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace detail

/// Derives a child seed from a parent seed and a stream index. Used wherever
/// a protocol role or a repeated experiment needs its own independent stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return detail::splitmix64(detail::splitmix64(seed) + stream);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view label) {
    return mix_seed(seed, detail::fnv1a64(label));
}

/// Deterministic, splittable random source. Draws come from mt19937_64 raw
/// output only, so sequences are identical across platforms. Substreams are
/// derived from the construction seed, independent of the parent's position.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1); the zero case (probability 2^-53) redraws.
    double next_open_unit() {
        double u;
        do {
            u = next_unit();
        } while (u == 0.0);
        return u;
    }

    /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

    /// Standard normal via Box-Muller; one value per call, no cached pair.
    double next_gaussian() {
        const double u1 = next_open_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::uint64_t seed() const noexcept { return seed_; }

    Rng derive(std::uint64_t stream) const { return Rng(mix_seed(seed_, stream)); }
    Rng derive(std::string_view label) const { return Rng(mix_seed(seed_, label)); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace farmlink

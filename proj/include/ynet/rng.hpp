#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace ynet {

// Counter-based random generator. Every draw is a pure function of
// (seed, stream_id, counter), so streams can be replayed or split freely:
// per-sample augmentation, per-batch dropout and per-parameter init all get
// their own stream_id and never interfere with each other.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t next_u64() { return word(seed_, stream_, counter_++); }

    // Uniform in [0, 1), 53 bits of precision.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; consumes exactly two draws.
    double normal() {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

    // Derives a stream id from a purpose tag and up to two integer keys.
    static std::uint64_t stream(std::string_view tag, std::uint64_t a = 0,
                                std::uint64_t b = 0) {
        std::uint64_t h = 0xcbf29ce484222325ull;  // FNV offset basis
        for (char c : tag) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        h = mix(h ^ a);
        h = mix(h ^ b);
        return h;
    }

    // The raw word function: pure in all three arguments.
    static std::uint64_t word(std::uint64_t seed, std::uint64_t stream_id,
                              std::uint64_t counter) {
        std::uint64_t h = mix(seed ^ 0x9e3779b97f4a7c15ull);
        h = mix(h ^ stream_id);
        h = mix(h ^ counter);
        return h;
    }

private:
    // SplitMix64 finalizer; full avalanche on 64 bits.
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebull;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

// Deterministic Fisher-Yates shuffle driven by the given stream.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace ynet

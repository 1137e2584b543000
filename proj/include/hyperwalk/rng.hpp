#ifndef HYPERWALK_RNG_HPP
#define HYPERWALK_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "hyperwalk/types.hpp"

namespace hyperwalk {

// All randomness in the library flows through these generators. They are
// specified bit-for-bit (no std::uniform_*_distribution, whose output is
// implementation-defined), so seeded runs reproduce across platforms and
// thread counts.

/// SplitMix64; used to mix seeds and to expand them into generator state.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// Derive a child seed from a master seed and a path of stream labels.
/// Each (label...) path yields a statistically independent stream key.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    SplitMix64 mix(seed);
    std::uint64_t key = mix.next();
    for (std::uint64_t label : path) {
        SplitMix64 step(key ^ (label + 0x9E3779B97F4A7C15ULL));
        key = step.next();
    }
    return key;
}

/// xoshiro256** stream seeded through SplitMix64 expansion.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        SplitMix64 mix(seed);
        for (auto& word : s_) word = mix.next();
        // all-zero state is the one invalid configuration
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
        : RngStream(derive_seed(seed, path)) {}

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); rejection sampling, no modulo bias.
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw InvalidArgument("uniform_index: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return static_cast<std::size_t>(x % span);
    }

    /// Index sampled proportionally to the (positive) weights.
    std::size_t weighted_index(const std::vector<double>& weights, double total) {
        double u = next_double() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    /// k distinct indices drawn uniformly from [0, n), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        if (k > n) throw InvalidArgument("sample_without_replacement: k > n");
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        std::vector<std::size_t> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + uniform_index(n - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace hyperwalk

#endif

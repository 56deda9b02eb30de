#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace pasv {

// Deterministic cross-platform random number generation. All randomness in
// the library flows through Rng so that identical seeds give identical
// results on every platform; std::* distributions are avoided because their
// output is implementation-defined.
//
// Generator: xoshiro256** 1.0 (public domain, Blackman & Vigna), state
// expanded from the 64-bit seed with SplitMix64 (Steele, Lea & Vigna).
// Substream seeds are derived as
//     derive_seed(seed, purpose) = splitmix64_next(seed XOR fnv1a64(purpose))
// which keeps one user-facing seed while giving independent streams per
// purpose string (and per grid index, chain id, ...).

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) {
    std::uint64_t state = seed ^ fnv1a64(purpose);
    return splitmix64_next(state);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose,
                                 std::uint64_t index) {
    std::uint64_t state = seed ^ fnv1a64(purpose);
    state ^= 0x9e3779b97f4a7c15ULL * (index + 1);
    return splitmix64_next(state);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
    }

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

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), unbiased via rejection of the low range.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Index in [0, cum.size()) from a cumulative probability vector whose
    // last entry is ~1. Deterministic tie handling: first bucket whose
    // cumulative value strictly exceeds the draw.
    std::size_t next_categorical(const std::vector<double>& cum) {
        double u = next_double();
        for (std::size_t i = 0; i + 1 < cum.size(); ++i) {
            if (u < cum[i]) return i;
        }
        return cum.size() - 1;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

} // namespace pasv

// Copyright 2026 The murk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace murk {

/// SplitMix64 finalizer; used for seeding and key mixing.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// FNV-1a hash of a string, for deriving substream keys from scenario names.
constexpr std::uint64_t hash_name(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// xoshiro256** generator (Blackman & Vigna). Each Monte Carlo trial owns an
/// independent instance derived from a (seed, scenario, estimator, trial)
/// key, so results do not depend on scheduling or worker count.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        // Expand the seed through SplitMix64 per the xoshiro seeding recipe.
        std::uint64_t z = seed;
        for (auto& w : state_) w = mix64(z++);
    }

    /// Deterministic substream for (seed, stream, substream, index).
    static Rng substream(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t substream, std::uint64_t index) {
        std::uint64_t k = mix64(seed ^ mix64(stream));
        k = mix64(k ^ mix64(substream));
        k = mix64(k ^ mix64(index));
        return Rng(k);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace murk

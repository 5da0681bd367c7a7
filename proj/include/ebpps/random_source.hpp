// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#pragma once

#include <array>
#include <cassert>
#include <cstdint>

namespace ebpps {

/// Seedable generator of uniform doubles in [0,1) and uniform integers in a
/// range. xoshiro256++ core seeded through splitmix64, so the sequence is
/// identical on every platform and the full state is four 64-bit words --
/// small enough to embed in a sampler snapshot and restore bit-exactly.
///
/// Not thread-safe; give each thread (or each trial) its own instance,
/// typically seeded via derive_seed().
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = split_mix(x);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0,1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). bound must be positive.
    /// Debiased multiply (Lemire), so no modulo bias.
    std::uint64_t next_index(std::uint64_t bound) {
        assert(bound > 0);
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::array<std::uint64_t, 4> state() const { return state_; }
    void restore(const std::array<std::uint64_t, 4>& state) { state_ = state; }

    /// splitmix64 step; advances x and returns the mixed value.
    static std::uint64_t split_mix(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Statistically independent seed for the k-th of many parallel streams
    /// (Monte Carlo trials, worker threads) rooted at `base`.
    static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
        std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (k + 1);
        return split_mix(x);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace ebpps

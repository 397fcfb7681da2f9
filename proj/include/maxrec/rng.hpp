// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0
//
// xoshiro256** with splitmix64 seeding. Pinned here (rather than using
// std::mt19937_64) so noise realizations are reproducible across machines
// and languages.

#ifndef MAXREC_RNG_HPP
#define MAXREC_RNG_HPP

#include <array>
#include <cstdint>

namespace maxrec {

inline std::uint64_t splitmix64_next(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed)
    {
        std::uint64_t sm = seed;
        for (auto& word : s_)
            word = splitmix64_next(sm);
    }

    std::uint64_t next()
    {
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

    // 53-bit uniform in [0,1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [-1,1)
    double symmetric() { return 2.0 * uniform01() - 1.0; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k)
    {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace maxrec

#endif

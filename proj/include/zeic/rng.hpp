#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace zeic {

using boost::multiprecision::cpp_int;

// SplitMix64 step (Steele, Lea, Flood 2014). Used only to derive stream
// seeds from a master seed; the generators themselves are mt19937_64.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed for sub-stream `stream` of a master seed. Deterministic and
// documented so experiment outputs are reproducible from the master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t state = master;
    std::uint64_t out = splitmix64_next(state);
    for (std::uint64_t i = 0; i < stream; ++i) out = splitmix64_next(state);
    return out;
}

// Portable seeded randomness. mt19937_64's output sequence is pinned by the
// C++ standard; every mapping below is implemented by hand (no
// std::uniform_*_distribution, whose output is implementation-defined), so
// the same seed yields the same draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1): top 53 bits scaled by 2^-53.
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) via masked rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::next_below: bound must be positive");
        const std::uint64_t mask = (bound <= 1) ? 0 : (std::bit_ceil(bound) - 1);
        std::uint64_t r;
        do {
            r = gen_() & mask;
        } while (r >= bound);
        return r;
    }

    // Uniform cpp_int in [0, bound), assembling 64-bit chunks and rejecting.
    cpp_int next_below_big(const cpp_int& bound) {
        if (bound <= 0) throw std::invalid_argument("Rng::next_below_big: bound must be positive");
        if (bound == 1) return 0;
        const unsigned bits = boost::multiprecision::msb(bound - 1) + 1;
        const unsigned chunks = (bits + 63) / 64;
        const unsigned top_bits = bits - 64 * (chunks - 1);
        const std::uint64_t top_mask =
            top_bits >= 64 ? ~0ULL : ((std::uint64_t{1} << top_bits) - 1);
        while (true) {
            cpp_int r = 0;
            for (unsigned c = 0; c < chunks; ++c) {
                std::uint64_t chunk = gen_();
                if (c == chunks - 1) chunk &= top_mask;
                r |= cpp_int(chunk) << (64 * c);
            }
            if (r < bound) return r;
        }
    }

    // Fisher-Yates; std::shuffle is unspecified, this one is pinned.
    template <typename It>
    void shuffle(It first, It last) {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            const std::uint64_t j = next_below(i);
            std::swap(first[i - 1], first[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

} // namespace zeic

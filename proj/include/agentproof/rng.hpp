#pragma once

#include <cstdint>
#include <random>

#include "agentproof/bigint.hpp"
#include "agentproof/errors.hpp"
#include "agentproof/sha256.hpp"

namespace agentproof {

// Deterministic random source. Every simulation draw flows through one of
// these, seeded explicitly, so identical seeds reproduce identical runs on
// any platform. mt19937_64 output is bit-exact per the C++ standard;
// uniform_int_distribution is not, so sampling is hand-rolled rejection.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, bound), bound >= 1.
    Bigint below(const Bigint& bound) {
        if (bound <= 0) throw ParameterError("Rng::below requires bound >= 1");
        std::size_t nbits = bit_length(bound);
        while (true) {
            Bigint candidate = bits(nbits);
            if (candidate < bound) return candidate;
        }
    }

    // Uniform integer in [lo, hi] inclusive.
    Bigint range(const Bigint& lo, const Bigint& hi) {
        if (hi < lo) throw ParameterError("Rng::range requires lo <= hi");
        return lo + below(hi - lo + 1);
    }

    // Uniform integer in [0, 2^nbits).
    Bigint bits(std::size_t nbits) {
        Bigint x = 0;
        std::size_t produced = 0;
        while (produced < nbits) {
            uint64_t word = next_u64();
            std::size_t take = nbits - produced;
            if (take >= 64) {
                x = (x << 64) + Bigint(to_mpz(word));
                produced += 64;
            } else {
                word >>= (64 - take);
                x = (x << take) + Bigint(to_mpz(word));
                produced += take;
            }
        }
        return x;
    }

    uint64_t below_u64(uint64_t bound) {
        if (bound == 0) throw ParameterError("Rng::below_u64 requires bound >= 1");
        uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    bool coin() { return (next_u64() & 1) != 0; }

private:
    static mpz_class to_mpz(uint64_t v) {
        mpz_class hi(static_cast<unsigned long>(v >> 32));
        mpz_class lo(static_cast<unsigned long>(v & 0xffffffffUL));
        return (hi << 32) + lo;
    }

    std::mt19937_64 engine_;
};

// Independent child seed for trial `index` of a campaign rooted at `seed`:
// first 8 octets of SHA-256("trial:v1" || seed || index), big-endian.
inline uint64_t derive_trial_seed(uint64_t seed, uint64_t index) {
    Sha256 h;
    Bytes label = "trial:v1";
    h.update(label);
    h.update(u64_be(seed));
    h.update(u64_be(index));
    Digest d = h.finish();
    uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out = (out << 8) | d[static_cast<std::size_t>(i)];
    return out;
}

}  // namespace agentproof

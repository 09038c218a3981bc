#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "agentproof/bigint.hpp"
#include "agentproof/errors.hpp"
#include "agentproof/rng.hpp"

namespace agentproof {

// Value in the ring Z_modulus, kept reduced: 0 <= value < modulus.
struct Residue {
    Bigint value;
    Bigint modulus;

    bool operator==(const Residue& o) const {
        return value == o.value && modulus == o.modulus;
    }
};

inline Residue residue(const Bigint& v, const Bigint& m) {
    if (m <= 0) throw ParameterError("modulus must be positive");
    return Residue{mod_floor(v, m), m};
}

// base^exp mod modulus.
inline Residue modpow(const Bigint& base, const Bigint& exp, const Bigint& modulus) {
    if (modulus <= 0) throw ParameterError("modpow: modulus must be >= 1");
    if (exp < 0) throw ParameterError("modpow: exponent must be non-negative");
    Bigint r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
    return Residue{r, modulus};
}

// x with a*x == 1 (mod modulus). Throws NotInvertibleError carrying
// gcd(a, modulus) when no inverse exists.
inline Residue modinv(const Bigint& a, const Bigint& modulus) {
    if (modulus <= 0) throw ParameterError("modinv: modulus must be >= 1");
    Bigint x;
    if (mpz_invert(x.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0) {
        Bigint g = gcd(mod_floor(a, modulus), modulus);
        throw NotInvertibleError(g, "not invertible: gcd = " + to_decimal(g));
    }
    return Residue{mod_floor(x, modulus), modulus};
}

// Unique x in [0, prod(moduli)) satisfying x == r_i (mod m_i) for every
// congruence. Moduli must be pairwise coprime.
inline Bigint crt_solve(const std::vector<std::pair<Bigint, Bigint>>& congruences) {
    if (congruences.empty()) throw ParameterError("crt_solve: empty congruence list");
    Bigint x = 0;
    Bigint modulus = 1;
    for (const auto& [r, m] : congruences) {
        if (m <= 0) throw ParameterError("crt_solve: modulus must be >= 1");
        if (gcd(modulus, m) != 1)
            throw ParameterError("crt_solve: moduli not pairwise coprime");
        // Fold: x' == x (mod modulus), x' == r (mod m).
        Bigint inv = modinv(modulus, m).value;
        Bigint k = mod_floor((mod_floor(r, m) - x) * inv, m);
        x += modulus * k;
        modulus *= m;
    }
    return x;
}

// Miller-Rabin with `rounds` random bases drawn from rng.
inline bool is_probable_prime(const Bigint& n, Rng& rng, int rounds = 64) {
    if (n < 2) return false;
    if (n < 4) return true;  // 2, 3
    if (!is_odd(n)) return false;
    Bigint d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    Bigint nm1 = n - 1;
    for (int i = 0; i < rounds; ++i) {
        Bigint a = rng.range(2, n - 2);
        Bigint x = modpow(a, d, n).value;
        if (x == 1 || x == nm1) continue;
        bool witness = true;
        for (unsigned long r = 1; r < s; ++r) {
            x = mod_floor(x * x, n);
            if (x == nm1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

namespace detail {

constexpr unsigned long kSmallPrimes[] = {
    3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,  41,  43,  47,  53,  59,
    61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137,
    139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211};

inline bool passes_trial_division(const Bigint& n) {
    for (unsigned long p : kSmallPrimes) {
        if (n == p) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    return true;
}

}  // namespace detail

// Probable prime of exactly `bits` bits (top and bottom bit set), passing
// 64 Miller-Rabin rounds. Deterministic for a given rng state.
inline Bigint gen_prime(std::size_t bits, Rng& rng) {
    if (bits < 4) throw ParameterError("gen_prime: bits must be >= 4");
    while (true) {
        Bigint candidate = rng.bits(bits);
        mpz_setbit(candidate.get_mpz_t(), bits - 1);
        mpz_setbit(candidate.get_mpz_t(), 0);
        if (!detail::passes_trial_division(candidate)) continue;
        if (is_probable_prime(candidate, rng)) return candidate;
    }
}

// Asmuth-Bloom public moduli: p0 bounds the secret domain, primes are the
// share moduli p_1 < ... < p_m, all pairwise coprime and above p0.
struct ModuliChain {
    Bigint p0;
    std::vector<Bigint> primes;

    const Bigint& p_max() const { return primes.back(); }

    Bigint product_smallest(std::size_t t) const {
        Bigint prod = 1;
        for (std::size_t j = 0; j < t && j < primes.size(); ++j) prod *= primes[j];
        return prod;
    }
};

inline std::vector<std::string> chain_violations(const ModuliChain& chain) {
    std::vector<std::string> v;
    if (chain.p0 < 2) v.push_back("p0 must be >= 2");
    if (chain.primes.empty()) v.push_back("share moduli list empty");
    for (std::size_t i = 0; i + 1 < chain.primes.size(); ++i)
        if (chain.primes[i] >= chain.primes[i + 1]) {
            v.push_back("share moduli not strictly increasing");
            break;
        }
    if (!chain.primes.empty() && chain.p0 >= chain.primes.front())
        v.push_back("p0 must be below p1");
    for (std::size_t i = 0; i < chain.primes.size(); ++i) {
        if (gcd(chain.p0, chain.primes[i]) != 1) {
            v.push_back("p0 not coprime with share moduli");
            break;
        }
    }
    for (std::size_t i = 0; i < chain.primes.size(); ++i)
        for (std::size_t j = i + 1; j < chain.primes.size(); ++j)
            if (gcd(chain.primes[i], chain.primes[j]) != 1) {
                v.push_back("share moduli not pairwise coprime");
                return v;
            }
    return v;
}

// Generates a chain for m shares at threshold t whose dealing window
// p_max < s < prod of the t smallest moduli leaves at least 2^64 candidate
// values of s for any secret below p0.
inline ModuliChain gen_moduli_chain(std::size_t m, std::size_t t,
                                    const Bigint& secret_bound, Rng& rng) {
    if (t < 2) throw ParameterError("gen_moduli_chain: t must be >= 2");
    if (t > m) throw ParameterError("gen_moduli_chain: t must be <= m");
    if (secret_bound < 2) throw ParameterError("gen_moduli_chain: secret_bound must be >= 2");

    ModuliChain chain;
    chain.p0 = gen_prime(bit_length(secret_bound) + 1, rng);
    std::size_t b0 = bit_length(chain.p0);
    std::size_t share_bits = std::max(b0 + 1, (b0 + 67) / t + 2);

    const Bigint min_window = pow2(64);
    for (int attempt = 0; attempt < 16; ++attempt, ++share_bits) {
        std::vector<Bigint> primes;
        while (primes.size() < m) {
            Bigint p = gen_prime(share_bits, rng);
            if (std::find(primes.begin(), primes.end(), p) == primes.end())
                primes.push_back(p);
        }
        std::sort(primes.begin(), primes.end());
        chain.primes = std::move(primes);
        Bigint window = chain.product_smallest(t) - chain.p_max();
        if (window / chain.p0 - 1 >= min_window && chain_violations(chain).empty())
            return chain;
    }
    throw InternalError("gen_moduli_chain: could not satisfy dealing window");
}

}  // namespace agentproof

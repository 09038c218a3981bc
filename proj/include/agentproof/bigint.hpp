#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace agentproof {

// Arbitrary-precision integer. All protocol values (moduli, residues,
// shares, challenges) use this type; serialized form is always a decimal
// string so wire formats stay language-neutral.
using Bigint = mpz_class;

using Bytes = std::string;  // raw octet strings (var values, payloads)

inline std::string to_decimal(const Bigint& x) { return x.get_str(10); }

inline Bigint from_decimal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty decimal string");
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("bad decimal string: " + s);
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("bad decimal string: " + s);
    return Bigint(s, 10);
}

// Big-endian interpretation of an octet string as a non-negative integer.
inline Bigint bigint_from_bytes(const Bytes& b) {
    Bigint x = 0;
    for (unsigned char c : b) {
        x <<= 8;
        x += static_cast<unsigned long>(c);
    }
    return x;
}

inline std::size_t bit_length(const Bigint& x) {
    if (x == 0) return 0;
    return mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline bool is_odd(const Bigint& x) { return mpz_odd_p(x.get_mpz_t()) != 0; }

inline Bigint gcd(const Bigint& a, const Bigint& b) {
    Bigint g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

// Floor division remainder, always in [0, m).
inline Bigint mod_floor(const Bigint& a, const Bigint& m) {
    Bigint r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Bigint pow2(std::size_t k) {
    Bigint x = 1;
    x <<= k;
    return x;
}

inline uint64_t to_u64(const Bigint& x) {
    if (x < 0 || bit_length(x) > 64) throw std::overflow_error("Bigint does not fit u64");
    uint64_t hi = mpz_get_ui(mpz_class(x >> 32).get_mpz_t());
    uint64_t lo = mpz_get_ui(mpz_class(x & Bigint(0xffffffffUL)).get_mpz_t());
    return (hi << 32) | lo;
}

inline Bytes u64_be(uint64_t v) {
    Bytes out(8, '\0');
    for (int i = 7; i >= 0; --i) {
        out[i] = static_cast<char>(v & 0xff);
        v >>= 8;
    }
    return out;
}

}  // namespace agentproof

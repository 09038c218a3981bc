#pragma once

// Guillou-Quisquater identification. The manager owns RSA-like keys
// (N, Kp public, kp private with Kp*kp == 1 mod phi(N)), derives a public
// equivalence J from each identity label and the matching secret
// sigma = J^-kp mod N. A prover holding sigma convinces a verifier through
// commit/challenge/response rounds: u = r^Kp, b random, v = r*sigma^b,
// accepted iff J^b * v^Kp == u (mod N). The same relation with a datum tag
// d in place of b yields per-datum proofs.

#include <cstdint>
#include <utility>

#include "agentproof/bigint.hpp"
#include "agentproof/errors.hpp"
#include "agentproof/numtheory.hpp"
#include "agentproof/rng.hpp"
#include "agentproof/sha256.hpp"

namespace agentproof {

struct GqPublicKey {
    Bigint N;
    Bigint Kp;
};

struct ManagerKeys {
    Bigint N;
    Bigint Kp;
    Bigint kp;   // private exponent
    Bigint phi;  // private, Euler totient of N

    GqPublicKey pub() const { return {N, Kp}; }
};

struct IdentityRecord {
    Bytes id;
    Residue J;
    Residue sigma;  // manager/agent secret, never broadcast
};

struct RoundTranscript {
    Bigint u;
    Bigint b;
    Bigint v;
    bool accepted = false;
};

enum class ChallengeSpace { Full, Binary };

inline const char* challenge_space_name(ChallengeSpace s) {
    return s == ChallengeSpace::Full ? "full" : "binary";
}

// Commitment round output. The nonce r stays on the prover side; only u may
// cross the wire.
struct Commitment {
    Bigint r;
    Bigint u;
};

namespace detail {

// Smallest prime >= floor that is coprime to phi. Primality checks use a
// fixed-seed rng so key generation consumes no caller entropy here.
inline Bigint pick_public_exponent(const Bigint& phi, const Bigint& floor) {
    Rng prime_rng(0x4b70u);
    Bigint c = floor < 2 ? Bigint(2) : floor;
    for (int tries = 0; tries < 100000; ++tries) {
        if (is_probable_prime(c, prime_rng, 32) && gcd(c, phi) == 1) return c;
        c = (c == 2) ? Bigint(3) : c + 2;
    }
    throw InternalError("no usable public exponent above floor");
}

}  // namespace detail

inline constexpr uint64_t kDefaultKpFloor = 65537;

// Test hook and keygen core: build keys from a known prime pair.
inline ManagerKeys keygen_from_primes(const Bigint& p, const Bigint& q,
                                      const Bigint& kp_floor = kDefaultKpFloor) {
    if (p < 3 || q < 3 || p == q) throw ParameterError("keygen: need two distinct odd primes");
    ManagerKeys keys;
    keys.N = p * q;
    keys.phi = (p - 1) * (q - 1);
    keys.Kp = detail::pick_public_exponent(keys.phi, kp_floor);
    keys.kp = modinv(keys.Kp, keys.phi).value;
    return keys;
}

inline ManagerKeys keygen(std::size_t bits, Rng& rng,
                          const Bigint& kp_floor = kDefaultKpFloor) {
    if (bits < 16) throw ParameterError("keygen: modulus size below 16-bit floor");
    std::size_t pbits = bits / 2 + (bits % 2);
    std::size_t qbits = bits / 2;
    while (true) {
        Bigint p = gen_prime(pbits, rng);
        Bigint q = gen_prime(qbits, rng);
        if (p == q) continue;
        if (bit_length(p * q) != bits) continue;
        return keygen_from_primes(p, q, kp_floor);
    }
}

// Public deterministic map from an identity label to its equivalence J:
// J = 2 + (int(digest(id || counter)) mod (N-3)), counter incremented until
// gcd(J, N) = 1. Every party computes the same J from (id, N).
inline Residue derive_J(const Bytes& id, const Bigint& N) {
    if (N < 6) throw ParameterError("derive_J: modulus too small");
    for (uint64_t counter = 0; counter < 256; ++counter) {
        Sha256 h;
        h.update(id);
        h.update(u64_be(counter));
        Bigint j = 2 + mod_floor(digest_to_bigint(h.finish()), N - 3);
        if (gcd(j, N) == 1) return Residue{j, N};
    }
    throw InternalError("derive_J: no invertible J in 256 tries");
}

// sigma = J^-kp mod N; satisfies sigma^Kp * J == 1 (mod N).
inline Residue derive_secret(const Residue& J, const ManagerKeys& keys) {
    Bigint j_inv = modinv(J.value, keys.N).value;
    return modpow(j_inv, keys.kp, keys.N);
}

inline Commitment prover_commit_with_nonce(const Bigint& r, const GqPublicKey& pub) {
    return Commitment{r, modpow(r, pub.Kp, pub.N).value};
}

inline Commitment prover_commit(const GqPublicKey& pub, Rng& rng) {
    Bigint r = rng.range(1, pub.N - 1);
    return prover_commit_with_nonce(r, pub);
}

inline Bigint verifier_challenge(const Bigint& N, ChallengeSpace space, Rng& rng) {
    if (space == ChallengeSpace::Binary) return rng.below(2);
    return rng.range(1, N);
}

inline Bigint prover_respond(const Bigint& r, const Residue& sigma, const Bigint& b,
                             const Bigint& N) {
    if (b < 0) throw ParameterError("prover_respond: challenge must be non-negative");
    return mod_floor(r * modpow(sigma.value, b, N).value, N);
}

inline bool verify_round(const Residue& J, const Bigint& u, const Bigint& b,
                         const Bigint& v, const GqPublicKey& pub) {
    Bigint lhs = mod_floor(modpow(J.value, b, pub.N).value * modpow(v, pub.Kp, pub.N).value,
                           pub.N);
    return lhs == mod_floor(u, pub.N);
}

// Exponent tag for a data payload: int(digest(payload)) mod N, with the
// degenerate exponents 0 and 1 remapped to fixed constants.
inline Bigint datum_tag(const Bytes& payload, const Bigint& N) {
    Bigint d = mod_floor(digest_to_bigint(digest(payload)), N);
    if (d == 0) return 2;
    if (d == 1) return 3;
    return d;
}

struct DataProof {
    Bigint u;
    Bigint v;
};

inline DataProof make_data_proof_with_nonce(const Residue& sigma, const Bigint& d,
                                            const Bigint& r, const GqPublicKey& pub) {
    if (d < 0) throw ParameterError("data proof: tag must be non-negative");
    Bigint u = modpow(r, pub.Kp, pub.N).value;
    Bigint v = mod_floor(r * modpow(sigma.value, d, pub.N).value, pub.N);
    return DataProof{u, v};
}

inline DataProof make_data_proof(const Residue& sigma, const Bigint& d,
                                 const GqPublicKey& pub, Rng& rng) {
    Bigint r = rng.range(1, pub.N - 1);
    return make_data_proof_with_nonce(sigma, d, r, pub);
}

inline bool verify_data_proof(const Residue& J, const Bigint& d, const Bigint& u,
                              const Bigint& v, const GqPublicKey& pub) {
    return verify_round(J, u, d, v, pub);
}

}  // namespace agentproof

#include <catch2/catch_amalgamated.hpp>

#include "agentproof/gq.hpp"
#include "oracles.hpp"

using namespace agentproof;

namespace {

// N = 77 micro fixture: p=7, q=11, phi=60, Kp=7, kp=43.
ManagerKeys fixture_keys() { return keygen_from_primes(7, 11, 2); }

}  // namespace

TEST_CASE("keygen fixture: forced primes 7 and 11") {
    ManagerKeys k = fixture_keys();
    CHECK(k.N == 77);
    CHECK(k.phi == 60);
    CHECK(k.Kp == 7);
    CHECK(k.kp == 43);
    CHECK(mod_floor(k.Kp * k.kp, k.phi) == 1);
}

TEST_CASE("keygen invariants over random keys") {
    Rng rng(31337);
    for (int i = 0; i < 100; ++i) {
        ManagerKeys k = keygen(32, rng);
        REQUIRE(mod_floor(k.Kp * k.kp, k.phi) == 1);
        REQUIRE(gcd(k.Kp, k.phi) == 1);
    }
}

TEST_CASE("keygen exact modulus size and determinism") {
    Rng a(7), b(7);
    ManagerKeys ka = keygen(16, a);
    ManagerKeys kb = keygen(16, b);
    CHECK(ka.N == kb.N);
    CHECK(ka.kp == kb.kp);
    CHECK(bit_length(ka.N) == 16);

    Rng c(99);
    CHECK(bit_length(keygen(64, c).N) == 64);
    CHECK_THROWS_AS(keygen(8, c), ParameterError);
}

TEST_CASE("keygen public exponent respects the floor") {
    ManagerKeys k = keygen_from_primes(7, 11, 2);
    CHECK(k.Kp == 7);  // 2, 3, 5 all divide phi = 60
    ManagerKeys k2 = keygen_from_primes(7, 11, 11);
    CHECK(k2.Kp == 11);
    Rng rng(5);
    ManagerKeys k3 = keygen(32, rng);
    CHECK(k3.Kp >= 65537);
}

TEST_CASE("derive_J is deterministic, in range, invertible") {
    ManagerKeys k = fixture_keys();
    Residue j1 = derive_J("host-A", k.N);
    Residue j2 = derive_J("host-A", k.N);
    CHECK(j1 == j2);

    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        Bytes id = "id-" + std::to_string(rng.next_u64());
        Residue j = derive_J(id, k.N);
        REQUIRE(j.value >= 2);
        REQUIRE(j.value <= k.N - 1);
        REQUIRE(gcd(j.value, k.N) == 1);
    }
    CHECK_THROWS_AS(derive_J("x", 5), ParameterError);
}

TEST_CASE("derive_J regression vector") {
    // Frozen at first build from the SHA-256 based map; guards the wire
    // compatibility of identity derivation.
    Residue j = derive_J("host-A", 77);
    CHECK(j.value == 9);
    CHECK(gcd(j.value, Bigint(77)) == 1);
}

TEST_CASE("derive_secret on the micro fixture") {
    ManagerKeys k = fixture_keys();
    Residue J{4, 77};
    Residue sigma = derive_secret(J, k);
    CHECK(sigma.value == 16);
    // sigma^Kp * J == 1 (mod N), via the repeated-multiplication oracle.
    Bigint lhs = mod_floor(oracle::naive_modpow(sigma.value, k.Kp, k.N) * J.value, k.N);
    CHECK(lhs == 1);

    CHECK(derive_secret(Residue{1, 77}, k).value == 1);
    CHECK_THROWS_AS(derive_secret(Residue{7, 77}, k), NotInvertibleError);
    try {
        derive_secret(Residue{7, 77}, k);
    } catch (const NotInvertibleError& e) {
        CHECK(e.g == 7);
    }
}

TEST_CASE("key consistency for derived identities") {
    Rng rng(404);
    ManagerKeys k = keygen(48, rng);
    for (int i = 0; i < 25; ++i) {
        Bytes id = "agent-" + std::to_string(i);
        Residue J = derive_J(id, k.N);
        Residue sigma = derive_secret(J, k);
        Bigint lhs = mod_floor(modpow(sigma.value, k.Kp, k.N).value * J.value, k.N);
        REQUIRE(lhs == 1);
    }
}

TEST_CASE("round fixture: r=2, b=3") {
    ManagerKeys k = fixture_keys();
    Residue J{4, 77};
    Residue sigma{16, 77};

    Commitment c = prover_commit_with_nonce(2, k.pub());
    CHECK(c.u == 51);
    Bigint v = prover_respond(c.r, sigma, 3, k.N);
    CHECK(v == 30);
    CHECK(verify_round(J, c.u, 3, v, k.pub()));
    CHECK_FALSE(verify_round(J, c.u, 3, 31, k.pub()));
}

TEST_CASE("round edge cases") {
    ManagerKeys k = fixture_keys();
    Residue sigma{16, 77};
    CHECK(prover_commit_with_nonce(1, k.pub()).u == 1);
    CHECK(prover_respond(2, sigma, 0, k.N) == 2);
    CHECK(prover_respond(1, Residue{1, 77}, 5, k.N) == 1);
    CHECK_THROWS_AS(prover_respond(2, sigma, -1, k.N), ParameterError);

    // b = 0 accepts any r: both sides reduce to r^Kp.
    for (Bigint r = 1; r < 20; ++r) {
        Commitment c = prover_commit_with_nonce(r, k.pub());
        CHECK(verify_round(Residue{4, 77}, c.u, 0, r, k.pub()));
    }
}

TEST_CASE("completeness exhaustive at fixture scale") {
    ManagerKeys k = fixture_keys();
    Residue J{4, 77};
    Residue sigma{16, 77};
    for (Bigint r = 1; r <= 76; ++r) {
        Commitment c = prover_commit_with_nonce(r, k.pub());
        for (Bigint b = 0; b <= 10; ++b) {
            Bigint v = prover_respond(r, sigma, b, k.N);
            REQUIRE(verify_round(J, c.u, b, v, k.pub()));
        }
    }
}

TEST_CASE("completeness randomized at 512 bits") {
    Rng rng(881);
    ManagerKeys k = keygen(512, rng);
    Residue J = derive_J("hop-0", k.N);
    Residue sigma = derive_secret(J, k);
    for (int i = 0; i < 8; ++i) {
        Commitment c = prover_commit(k.pub(), rng);
        Bigint b = verifier_challenge(k.N, ChallengeSpace::Full, rng);
        Bigint v = prover_respond(c.r, sigma, b, k.N);
        REQUIRE(verify_round(J, c.u, b, v, k.pub()));
    }
}

TEST_CASE("verifier_challenge ranges and determinism") {
    Rng rng(12);
    int ones = 0;
    for (int i = 0; i < 10000; ++i) {
        Bigint b = verifier_challenge(77, ChallengeSpace::Binary, rng);
        REQUIRE((b == 0 || b == 1));
        if (b == 1) ++ones;
    }
    CHECK(ones > 4500);
    CHECK(ones < 5500);

    for (int i = 0; i < 1000; ++i) {
        Bigint b = verifier_challenge(77, ChallengeSpace::Full, rng);
        REQUIRE(b >= 1);
        REQUIRE(b <= 77);
    }

    Rng s1(3), s2(3);
    for (int i = 0; i < 50; ++i)
        REQUIRE(verifier_challenge(1000, ChallengeSpace::Full, s1) ==
                verifier_challenge(1000, ChallengeSpace::Full, s2));
}

TEST_CASE("commit nonces vary across calls") {
    Rng rng(6);
    ManagerKeys k = fixture_keys();
    Commitment a = prover_commit(k.pub(), rng);
    Commitment b = prover_commit(k.pub(), rng);
    CHECK(a.r != b.r);  // 1/76 collision chance, fixed seed keeps it stable
    CHECK(a.r >= 1);
    CHECK(a.r <= k.N - 1);
}

TEST_CASE("soundness: secret-less guessing prover at the binary boundary") {
    // The optimal cheater guesses the bit before committing; acceptance per
    // round is exactly the guess hit rate.
    ManagerKeys k = fixture_keys();
    Residue J{4, 77};
    Rng rng(2718);
    int accepted = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        Bigint guess = rng.below(2);
        Bigint w = rng.range(1, k.N - 1);
        Bigint u = mod_floor(modpow(J.value, guess, k.N).value *
                                 modpow(w, k.Kp, k.N).value,
                             k.N);
        Bigint b = verifier_challenge(k.N, ChallengeSpace::Binary, rng);
        if (verify_round(J, u, b, w, k.pub())) ++accepted;
    }
    double rate = double(accepted) / trials;
    CHECK(rate > 0.47);
    CHECK(rate < 0.53);
}

TEST_CASE("soundness: ten-round acceptance is near 2^-10") {
    ManagerKeys k = fixture_keys();
    Residue J{4, 77};
    Rng rng(99101);
    int accepted = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        bool all = true;
        for (int round = 0; round < 10 && all; ++round) {
            Bigint guess = rng.below(2);
            Bigint w = rng.range(1, k.N - 1);
            Bigint u = mod_floor(modpow(J.value, guess, k.N).value *
                                     modpow(w, k.Kp, k.N).value,
                                 k.N);
            Bigint b = verifier_challenge(k.N, ChallengeSpace::Binary, rng);
            all = verify_round(J, u, b, w, k.pub());
        }
        if (all) ++accepted;
    }
    CHECK(double(accepted) / trials <= 0.01);
}

TEST_CASE("data proof fixture (sigma=16, d=3, r=2)") {
    ManagerKeys k = fixture_keys();
    Residue sigma{16, 77};
    Residue J{4, 77};
    DataProof p = make_data_proof_with_nonce(sigma, 3, 2, k.pub());
    CHECK(p.u == 51);
    CHECK(p.v == 30);
    CHECK(verify_data_proof(J, 3, p.u, p.v, k.pub()));
    // Tampered tag: 4^4 * 30^7 mod 77 = 50 != 51.
    CHECK_FALSE(verify_data_proof(J, 4, p.u, p.v, k.pub()));
    CHECK_FALSE(verify_data_proof(J, 3, p.u, p.v + 1, k.pub()));
}

TEST_CASE("data proof with d=0 degenerates to v=r") {
    ManagerKeys k = fixture_keys();
    DataProof p = make_data_proof_with_nonce(Residue{16, 77}, 0, 2, k.pub());
    CHECK(p.v == 2);
    // Verifies for any J: both sides are r^Kp.
    CHECK(verify_data_proof(Residue{4, 77}, 0, p.u, p.v, k.pub()));
    CHECK(verify_data_proof(Residue{9, 77}, 0, p.u, p.v, k.pub()));
}

TEST_CASE("datum_tag avoids degenerate exponents") {
    Bigint N = 77;
    Rng rng(55);
    for (int i = 0; i < 500; ++i) {
        Bytes payload = "payload-" + std::to_string(rng.next_u64());
        Bigint d = datum_tag(payload, N);
        REQUIRE(d >= 2);
        REQUIRE(d < N);
    }
    CHECK(datum_tag("abc", N) == datum_tag("abc", N));
}

TEST_CASE("fresh nonces give distinct data proofs for equal payloads") {
    ManagerKeys k = fixture_keys();
    Rng rng(61);
    Residue sigma{16, 77};
    DataProof a = make_data_proof(sigma, 5, k.pub(), rng);
    DataProof b = make_data_proof(sigma, 5, k.pub(), rng);
    CHECK(a.u != b.u);
    Residue J{4, 77};
    CHECK(verify_data_proof(J, 5, a.u, a.v, k.pub()));
    CHECK(verify_data_proof(J, 5, b.u, b.v, k.pub()));
}

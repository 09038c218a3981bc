#include <catch2/catch_amalgamated.hpp>

#include "agentproof/numtheory.hpp"
#include "agentproof/sha256.hpp"
#include "oracles.hpp"

using namespace agentproof;

TEST_CASE("modpow basics") {
    CHECK(modpow(2, 7, 77).value == 51);
    CHECK(modpow(5, 0, 13).value == 1);
    CHECK(modpow(3, 4, 7).value == 4);
    CHECK(modpow(0, 0, 5).value == 1);
    CHECK(modpow(-3, 3, 7).value == mod_floor(Bigint(-27), 7));
    CHECK(modpow(10, 100, 1).value == 0);
    CHECK_THROWS_AS(modpow(2, 3, 0), ParameterError);
    CHECK_THROWS_AS(modpow(2, -1, 5), ParameterError);
}

TEST_CASE("modpow matches repeated-multiplication oracle") {
    // Exhaustive over a small cube, then dense sampling at the 2^10 bound.
    for (Bigint a = 0; a <= 12; ++a)
        for (Bigint e = 0; e <= 12; ++e)
            for (Bigint n = 1; n <= 12; ++n)
                REQUIRE(modpow(a, e, n).value == oracle::naive_modpow(a, e, n));

    Rng rng(2024);
    for (int i = 0; i < 2000; ++i) {
        Bigint a = rng.below(1024), e = rng.below(1024), n = 1 + rng.below(1023);
        REQUIRE(modpow(a, e, n).value == oracle::naive_modpow(a, e, n));
    }
}

TEST_CASE("modpow result is a reduced residue") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        Bigint n = 2 + rng.below(pow2(64));
        Residue r = modpow(rng.below(pow2(80)), rng.below(pow2(20)), n);
        REQUIRE(r.value >= 0);
        REQUIRE(r.value < r.modulus);
    }
}

TEST_CASE("modinv basics") {
    CHECK(modinv(4, 77).value == 58);
    CHECK(modinv(1, 100).value == 1);
    auto thrown = false;
    try {
        modinv(6, 9);
    } catch (const NotInvertibleError& e) {
        thrown = true;
        CHECK(e.g == 3);
    }
    CHECK(thrown);
}

TEST_CASE("modinv matches scan oracle") {
    for (Bigint n = 1; n <= 64; ++n)
        for (Bigint a = 0; a < n; ++a) {
            auto expected = oracle::naive_modinv(a, n);
            if (expected) {
                REQUIRE(modinv(a, n).value == *expected);
            } else {
                REQUIRE_THROWS_AS(modinv(a, n), NotInvertibleError);
            }
        }
}

TEST_CASE("modinv product property") {
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        Bigint n = 2 + rng.below(pow2(128));
        Bigint a = rng.below(n);
        if (gcd(a, n) != 1) continue;
        REQUIRE(mod_floor(modinv(a, n).value * a, n) == 1);
    }
}

TEST_CASE("crt_solve basics") {
    CHECK(crt_solve({{5, 11}, {12, 13}}) == 38);
    CHECK(crt_solve({{0, 3}, {0, 5}}) == 0);
    CHECK(crt_solve({{3, 11}, {12, 13}}) == 25);
    CHECK(crt_solve({{4, 9}}) == 4);
    CHECK_THROWS_AS(crt_solve({}), ParameterError);
    CHECK_THROWS_AS(crt_solve({{1, 6}, {2, 9}}), ParameterError);
}

TEST_CASE("crt_solve matches brute-force scan") {
    const std::vector<std::vector<Bigint>> moduli_sets = {
        {3, 5}, {4, 9}, {5, 7, 9}, {7, 11, 13}, {2, 3, 5, 7}, {11, 13}, {16, 21, 25}};
    Rng rng(13);
    for (const auto& ms : moduli_sets) {
        Bigint prod = 1;
        for (const auto& m : ms) prod *= m;
        REQUIRE(prod < pow2(20));
        for (int rep = 0; rep < 40; ++rep) {
            std::vector<std::pair<Bigint, Bigint>> congruences;
            for (const auto& m : ms) congruences.push_back({rng.below(m), m});
            Bigint got = crt_solve(congruences);
            REQUIRE(got == *oracle::naive_crt(congruences));
            REQUIRE(got >= 0);
            REQUIRE(got < prod);
            for (const auto& [r, m] : congruences) REQUIRE(got % m == r);
        }
    }
}

TEST_CASE("crt_solve exhaustive residues over a small pair") {
    for (Bigint r1 = 0; r1 < 11; ++r1)
        for (Bigint r2 = 0; r2 < 13; ++r2) {
            Bigint x = crt_solve({{r1, 11}, {r2, 13}});
            REQUIRE(x % 11 == r1);
            REQUIRE(x % 13 == r2);
            REQUIRE(x < 143);
        }
}

TEST_CASE("gen_prime properties") {
    Rng rng(1);
    for (std::size_t bits : {4u, 5u, 8u, 12u, 16u}) {
        Bigint p = gen_prime(bits, rng);
        REQUIRE(bit_length(p) == bits);
        REQUIRE(is_odd(p));
        REQUIRE(oracle::trial_division_prime(p));
    }
    CHECK_THROWS_AS(gen_prime(3, rng), ParameterError);
}

TEST_CASE("gen_prime determinism") {
    Rng a(1), b(1);
    CHECK(gen_prime(8, a) == gen_prime(8, b));
    Rng c(1), d(1);
    CHECK(gen_prime(64, c) == gen_prime(64, d));
}

TEST_CASE("gen_prime output passes an independent Miller-Rabin check") {
    Rng rng(5);
    Bigint p = gen_prime(128, rng);
    Rng check_rng(99);
    CHECK(is_probable_prime(p, check_rng));
    CHECK_FALSE(is_probable_prime(p * 3, check_rng));
}

TEST_CASE("is_probable_prime agrees with trial division below 2000") {
    Rng rng(17);
    for (Bigint n = 0; n < 2000; ++n)
        REQUIRE(is_probable_prime(n, rng, 16) == oracle::trial_division_prime(n));
}

TEST_CASE("gen_moduli_chain produces a valid chain") {
    Rng rng(42);
    ModuliChain chain = gen_moduli_chain(3, 2, 7, rng);
    CHECK(chain.p0 > 7);
    CHECK(chain.primes.size() == 3);
    CHECK(chain_violations(chain).empty());
    // Dealing window leaves at least 2^64 candidates for s.
    Bigint window = chain.product_smallest(2) - chain.p_max();
    CHECK(window / chain.p0 - 1 >= pow2(64));

    CHECK_THROWS_AS(gen_moduli_chain(3, 4, 7, rng), ParameterError);
    CHECK_THROWS_AS(gen_moduli_chain(3, 1, 7, rng), ParameterError);
    CHECK_THROWS_AS(gen_moduli_chain(3, 2, 1, rng), ParameterError);
}

TEST_CASE("gen_moduli_chain determinism and large-bound behavior") {
    Rng a(9), b(9);
    Bigint bound = pow2(96) + 12345;
    ModuliChain ca = gen_moduli_chain(4, 3, bound, a);
    ModuliChain cb = gen_moduli_chain(4, 3, bound, b);
    CHECK(ca.p0 == cb.p0);
    CHECK(ca.primes == cb.primes);
    CHECK(ca.p0 > bound);
    CHECK(chain_violations(ca).empty());
}

TEST_CASE("chain_violations names each broken condition") {
    ModuliChain ok{7, {11, 13, 17}};
    CHECK(chain_violations(ok).empty());

    ModuliChain unsorted{7, {13, 11, 17}};
    auto v = chain_violations(unsorted);
    REQUIRE_FALSE(v.empty());

    ModuliChain shared_factor{7, {11, 22, 23}};
    v = chain_violations(shared_factor);
    bool found = false;
    for (const auto& s : v) found = found || s.find("coprime") != std::string::npos;
    CHECK(found);

    ModuliChain p0_high{13, {11, 17, 19}};
    v = chain_violations(p0_high);
    found = false;
    for (const auto& s : v) found = found || s.find("below p1") != std::string::npos;
    CHECK(found);
}

TEST_CASE("sha256 reference vectors") {
    // FIPS 180-4 / NIST CAVS vectors.
    CHECK(to_hex(digest("")) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(to_hex(digest("abc")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(to_hex(digest("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    Bytes million(1000000, 'a');
    CHECK(to_hex(digest(million)) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("digest determinism and sensitivity") {
    CHECK(digest("x") == digest("x"));
    CHECK(digest("") != digest("0"));
    CHECK(digest("host-A") != digest("host-B"));
}

TEST_CASE("digest_to_bigint is big-endian") {
    Bytes two_bytes("\x01\x02", 2);
    CHECK(bigint_from_bytes(two_bytes) == 258);
    Digest d = digest("abc");
    Bigint x = digest_to_bigint(d);
    CHECK(bit_length(x) <= 256);
    CHECK(mod_floor(x, 256) == d[31]);
}

TEST_CASE("rng below/range are in bounds and deterministic") {
    Rng a(123), b(123);
    for (int i = 0; i < 200; ++i) {
        Bigint bound = 1 + Bigint(i) * 37 + pow2(static_cast<std::size_t>(i % 70));
        Bigint x = a.below(bound);
        REQUIRE(x >= 0);
        REQUIRE(x < bound);
        REQUIRE(x == b.below(bound));
    }
    Rng c(5);
    for (int i = 0; i < 100; ++i) {
        Bigint x = c.range(10, 20);
        REQUIRE(x >= 10);
        REQUIRE(x <= 20);
    }
    CHECK_THROWS_AS(a.below(0), ParameterError);
}

TEST_CASE("derive_trial_seed is stable and index-sensitive") {
    CHECK(derive_trial_seed(1, 0) == derive_trial_seed(1, 0));
    CHECK(derive_trial_seed(1, 0) != derive_trial_seed(1, 1));
    CHECK(derive_trial_seed(1, 0) != derive_trial_seed(2, 0));
}

#pragma once

// Asmuth-Bloom (t, m) threshold sharing over the public moduli chain.
// The dealer blinds the secret as s = sigma + alpha*p0 with
// p_max < s < prod of the t smallest share moduli, then emits
// s_i = s mod p_i. Any t shares recover s exactly by CRT (s is below the
// product of any t moduli), and sigma = s mod p0.

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "agentproof/bigint.hpp"
#include "agentproof/errors.hpp"
#include "agentproof/numtheory.hpp"
#include "agentproof/rng.hpp"

namespace agentproof {

struct SharingParams {
    ModuliChain chain;
    std::size_t t = 0;  // threshold
    std::size_t m = 0;  // total share count

    Bigint window_upper() const { return chain.product_smallest(t); }
};

struct Share {
    std::size_t index = 0;  // 1-based position in the chain
    Bigint value;
    Bigint modulus;

    bool operator==(const Share& o) const {
        return index == o.index && value == o.value && modulus == o.modulus;
    }
};

struct ShareSet {
    SharingParams params;
    std::vector<Share> shares;  // all m, in chain order
    Bigint s;                   // blinded secret, dealer-private

    // Partition policy: shares 1..t-1 ride with the agent, the rest go to
    // hosts over the secure channel.
    std::vector<Share> agent_shares() const {
        return {shares.begin(), shares.begin() + static_cast<std::ptrdiff_t>(params.t - 1)};
    }
    std::vector<Share> host_shares() const {
        return {shares.begin() + static_cast<std::ptrdiff_t>(params.t - 1), shares.end()};
    }
};

// Reports every violated dealing condition by name; empty means ok.
// strict adds the classical Asmuth-Bloom security inequality, which the
// dealing conditions themselves do not require.
inline std::vector<std::string> validate_params(const SharingParams& params,
                                                const Bigint& secret_bound,
                                                bool strict = false) {
    std::vector<std::string> v;
    if (params.t < 2) v.push_back("t must be >= 2");
    if (params.t > params.m) v.push_back("t must be <= m");
    if (params.m != params.chain.primes.size())
        v.push_back("m must equal the share moduli count");
    for (auto& c : chain_violations(params.chain)) v.push_back(c);
    if (!(params.chain.p0 > secret_bound)) v.push_back("p0 must exceed secret bound");
    if (v.empty()) {
        Bigint prod_t = params.window_upper();
        if (!(params.chain.p_max() < prod_t))
            v.push_back("p_max must be below product of t smallest moduli");
        else if (prod_t - params.chain.p_max() - 1 < params.chain.p0)
            v.push_back("dealing window shorter than p0");
        if (strict) {
            Bigint prod_largest = 1;
            for (std::size_t j = 0; j + 1 < params.t; ++j)
                prod_largest *= params.chain.primes[params.m - 1 - j];
            if (!(params.chain.p0 * prod_largest < prod_t))
                v.push_back("classical Asmuth-Bloom inequality violated");
        }
    }
    return v;
}

// Legal alpha range for s = sigma + alpha*p0 inside (p_max, prod_t).
inline std::pair<Bigint, Bigint> alpha_window(const Bigint& sigma, const SharingParams& params) {
    const Bigint& p0 = params.chain.p0;
    Bigint lo = (params.chain.p_max() - sigma) / p0 + 1;
    Bigint hi = (params.window_upper() - 1 - sigma) / p0;
    return {lo, hi};
}

inline ShareSet deal_with_alpha(const Bigint& sigma, const SharingParams& params,
                                const Bigint& alpha) {
    if (sigma < 0 || sigma >= params.chain.p0)
        throw ParameterError("deal: secret must be in [0, p0)");
    auto violations = validate_params(params, sigma);
    if (!violations.empty()) {
        std::string msg = "deal: invalid params:";
        for (const auto& s : violations) msg += " [" + s + "]";
        throw ParameterError(msg);
    }
    auto [lo, hi] = alpha_window(sigma, params);
    if (alpha < lo || alpha > hi) throw DealError("deal: alpha outside the legal window");

    ShareSet set;
    set.params = params;
    set.s = sigma + alpha * params.chain.p0;
    for (std::size_t i = 0; i < params.m; ++i) {
        const Bigint& p = params.chain.primes[i];
        set.shares.push_back(Share{i + 1, mod_floor(set.s, p), p});
    }
    return set;
}

inline ShareSet deal(const Bigint& sigma, const SharingParams& params, Rng& rng) {
    if (sigma < 0 || sigma >= params.chain.p0)
        throw ParameterError("deal: secret must be in [0, p0)");
    auto [lo, hi] = alpha_window(sigma, params);
    if (hi < lo) throw DealError("deal: empty alpha window");
    return deal_with_alpha(sigma, params, rng.range(lo, hi));
}

// Combiner: needs at least t distinct shares; reconstructs s via CRT and
// reduces to the secret domain.
inline Bigint combine(std::span<const Share> shares, const SharingParams& params) {
    if (shares.size() < params.t)
        throw ThresholdNotMetError(params.t, shares.size());
    std::set<std::size_t> seen;
    std::vector<std::pair<Bigint, Bigint>> congruences;
    for (const Share& sh : shares) {
        if (!seen.insert(sh.index).second)
            throw ParameterError("combine: duplicate share index " + std::to_string(sh.index));
        congruences.push_back({sh.value, sh.modulus});
    }
    return mod_floor(crt_solve(congruences), params.chain.p0);
}

inline Bigint combine(const std::vector<Share>& shares, const SharingParams& params) {
    return combine(std::span<const Share>(shares), params);
}

}  // namespace agentproof

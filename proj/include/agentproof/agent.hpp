#pragma once

// The agent as a migrating value: canonical execution state, per-hop share
// vaults keyed to the expected state digest, and the append-only data
// ledger. Unbinding a vault against a wrong state silently yields garbage
// shares; the failure only ever surfaces through the ZK protocol, never
// through an agent-side oracle a host could probe.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentproof/bigint.hpp"
#include "agentproof/errors.hpp"
#include "agentproof/gq.hpp"
#include "agentproof/sha256.hpp"
#include "agentproof/sharing.hpp"

namespace agentproof {

using Json = nlohmann::ordered_json;

// Scratch variable written by the FSM transition step. Must not be listed
// as protected, or authorized execution would invalidate the agent.
inline constexpr const char* kAccumulatorVar = "acc";

struct AgentState {
    Digest code_id{};
    std::map<std::string, Bytes> vars;  // sorted keys give canonical order
    std::set<std::string> protected_names;
    std::size_t hop_index = 0;
};

// Digest over code_id plus the protected variable subset, length-prefixed
// and key-sorted so insertion order never matters. Scratch vars and
// hop_index are excluded: authorized execution must not change the digest.
inline Digest canonical_digest(const AgentState& state) {
    Sha256 h;
    h.update(state.code_id.data(), state.code_id.size());
    uint64_t count = 0;
    for (const auto& [name, value] : state.vars)
        if (state.protected_names.count(name)) ++count;
    h.update(u64_be(count));
    for (const auto& [name, value] : state.vars) {
        if (!state.protected_names.count(name)) continue;
        h.update(u64_be(name.size()));
        h.update(name);
        h.update(u64_be(value.size()));
        h.update(value);
    }
    return h.finish();
}

// kdf(D, i, p) = int(digest(D || i-as-8-octets)) mod p.
inline Bigint kdf_mask(const Digest& d, std::size_t index, const Bigint& p) {
    Sha256 h;
    h.update(d.data(), d.size());
    h.update(u64_be(index));
    return mod_floor(digest_to_bigint(h.finish()), p);
}

struct VaultEntry {
    std::size_t index = 0;
    Bigint mask;
    Bigint modulus;
};

struct ShareVault {
    std::vector<VaultEntry> entries;
    Digest bound_commitment{};  // diagnostics only, unused by unmasking
};

inline ShareVault bind_shares(const std::vector<Share>& agent_shares,
                              const Digest& expected_digest) {
    ShareVault vault;
    for (const Share& sh : agent_shares) {
        Bigint mask = mod_floor(sh.value + kdf_mask(expected_digest, sh.index, sh.modulus),
                                sh.modulus);
        vault.entries.push_back(VaultEntry{sh.index, mask, sh.modulus});
    }
    Sha256 h;
    h.update(expected_digest.data(), expected_digest.size());
    vault.bound_commitment = h.finish();
    return vault;
}

// Recreates shares from the live state. Correct iff the live state digest
// matches the digest the vault was bound to; otherwise the shares are
// effectively random residues and no error is raised here.
inline std::vector<Share> unbind_shares(const ShareVault& vault, const AgentState& live_state,
                                        std::size_t threshold) {
    if (vault.entries.size() != threshold - 1)
        throw ParameterError("unbind_shares: vault must hold t-1 entries");
    Digest d = canonical_digest(live_state);
    std::vector<Share> out;
    for (const VaultEntry& e : vault.entries) {
        Bigint value = mod_floor(e.mask - kdf_mask(d, e.index, e.modulus), e.modulus);
        out.push_back(Share{e.index, value, e.modulus});
    }
    return out;
}

struct LedgerEntry {
    Bytes payload;
    Bigint d;
    Bigint u;
    Bigint v;
    std::string source_host;
    std::size_t hop_index = 0;
};

struct PublicIdentity {
    Bytes id;
    Bigint J;
};

struct AgentImage {
    std::vector<PublicIdentity> identities;  // one per hop, in hop order
    std::vector<ShareVault> vaults;          // one per identity
    std::vector<LedgerEntry> ledger;         // append-only
    AgentState state;
};

inline Residue reconstruct_secret(const AgentImage& image, std::size_t hop,
                                  const Share& offered, const SharingParams& params,
                                  const Bigint& N) {
    if (hop >= image.vaults.size())
        throw ParameterError("reconstruct_secret: no vault for hop");
    std::vector<Share> shares = unbind_shares(image.vaults[hop], image.state, params.t);
    shares.push_back(offered);
    return Residue{combine(shares, params), N};
}

// Everything the agent needs from its current hop to mint a data proof.
struct DataContext {
    GqPublicKey pub;
    Residue J;
    SharingParams params;
    Share host_share;
};

inline const LedgerEntry& append_datum(AgentImage& image, const Bytes& payload,
                                       const std::string& source_host,
                                       const DataContext& ctx, Rng& rng) {
    Residue sigma = reconstruct_secret(image, image.state.hop_index, ctx.host_share,
                                       ctx.params, ctx.pub.N);
    Bigint d = datum_tag(payload, ctx.pub.N);
    DataProof proof = make_data_proof(sigma, d, ctx.pub, rng);
    if (!verify_data_proof(ctx.J, d, proof.u, proof.v, ctx.pub))
        throw StateCorrupt("append_datum: reconstructed secret fails its own proof");
    image.ledger.push_back(
        LedgerEntry{payload, d, proof.u, proof.v, source_host, image.state.hop_index});
    return image.ledger.back();
}

// Deterministic FSM step: folds the input into the scratch accumulator.
// Protected vars and code_id are never touched.
inline void apply_transition(AgentImage& image, const Bytes& input,
                             const std::set<Bytes>& alphabet) {
    if (!alphabet.count(input))
        throw TransitionRejected("input not in the hop's authorized alphabet");
    if (image.state.protected_names.count(kAccumulatorVar))
        throw InternalError("accumulator variable is marked protected");
    Sha256 h;
    h.update(image.state.vars[kAccumulatorVar]);
    h.update(input);
    image.state.vars[kAccumulatorVar] = digest_bytes(h.finish());
}

// --- migration serialization ------------------------------------------
// JSON with fixed field order; all big integers as decimal strings, all
// byte strings as hex. dump() of this structure is the byte-exact transfer
// format carried by AgentTransfer messages.

inline Json state_to_json(const AgentState& s) {
    Json vars = Json::array();
    for (const auto& [name, value] : s.vars) vars.push_back({name, bytes_to_hex(value)});
    Json prot = Json::array();
    for (const auto& name : s.protected_names) prot.push_back(name);
    return Json{{"code_id", to_hex(s.code_id)},
                {"hop_index", s.hop_index},
                {"protected", prot},
                {"vars", vars}};
}

inline AgentState state_from_json(const Json& j) {
    AgentState s;
    s.code_id = digest_from_hex(j.at("code_id").get<std::string>());
    s.hop_index = j.at("hop_index").get<std::size_t>();
    for (const auto& p : j.at("protected")) s.protected_names.insert(p.get<std::string>());
    for (const auto& pair : j.at("vars"))
        s.vars[pair.at(0).get<std::string>()] = bytes_from_hex(pair.at(1).get<std::string>());
    return s;
}

inline Json image_to_json(const AgentImage& img) {
    Json identities = Json::array();
    for (const auto& ident : img.identities)
        identities.push_back({{"id", ident.id}, {"J", to_decimal(ident.J)}});
    Json vaults = Json::array();
    for (std::size_t hop = 0; hop < img.vaults.size(); ++hop) {
        Json entries = Json::array();
        for (const auto& e : img.vaults[hop].entries)
            entries.push_back({{"index", e.index},
                               {"mask", to_decimal(e.mask)},
                               {"modulus", to_decimal(e.modulus)}});
        vaults.push_back({{"hop", hop},
                          {"entries", entries},
                          {"commitment", to_hex(img.vaults[hop].bound_commitment)}});
    }
    Json ledger = Json::array();
    for (const auto& e : img.ledger)
        ledger.push_back({{"payload_hex", bytes_to_hex(e.payload)},
                          {"d", to_decimal(e.d)},
                          {"u", to_decimal(e.u)},
                          {"v", to_decimal(e.v)},
                          {"source_host", e.source_host},
                          {"hop", e.hop_index}});
    return Json{{"identities", identities},
                {"vaults", vaults},
                {"ledger", ledger},
                {"state", state_to_json(img.state)}};
}

inline AgentImage image_from_json(const Json& j) {
    AgentImage img;
    for (const auto& ident : j.at("identities"))
        img.identities.push_back(PublicIdentity{ident.at("id").get<std::string>(),
                                                from_decimal(ident.at("J").get<std::string>())});
    for (const auto& vj : j.at("vaults")) {
        ShareVault vault;
        for (const auto& e : vj.at("entries"))
            vault.entries.push_back(VaultEntry{e.at("index").get<std::size_t>(),
                                               from_decimal(e.at("mask").get<std::string>()),
                                               from_decimal(e.at("modulus").get<std::string>())});
        vault.bound_commitment = digest_from_hex(vj.at("commitment").get<std::string>());
        img.vaults.push_back(std::move(vault));
    }
    for (const auto& e : j.at("ledger"))
        img.ledger.push_back(LedgerEntry{bytes_from_hex(e.at("payload_hex").get<std::string>()),
                                         from_decimal(e.at("d").get<std::string>()),
                                         from_decimal(e.at("u").get<std::string>()),
                                         from_decimal(e.at("v").get<std::string>()),
                                         e.at("source_host").get<std::string>(),
                                         e.at("hop").get<std::size_t>()});
    img.state = state_from_json(j.at("state"));
    return img;
}

}  // namespace agentproof

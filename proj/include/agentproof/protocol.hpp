#pragma once

// Simulation actors and the two verification scenarios. The world is a
// single-threaded deterministic event loop state: manager, hosts and the
// migrating agent exchange Messages over simulated channels, every draw of
// randomness comes from the one seeded rng, and every message and verdict
// lands in the trace.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agentproof/agent.hpp"
#include "agentproof/config.hpp"
#include "agentproof/messages.hpp"
#include "agentproof/trace.hpp"

namespace agentproof {

inline constexpr const char* kManagerId = "manager";

struct HostProfile {
    std::string id;
    std::map<std::size_t, Share> granted;  // hop index -> granted share
    HostBehavior behavior;
};

// Manager-private material; wiped by disable_manager() to demonstrate that
// hop verification needs no manager involvement.
struct ManagerState {
    ManagerKeys keys;
    std::vector<IdentityRecord> identities;
    std::vector<ShareSet> share_sets;
    Digest expected_digest{};
    bool disabled = false;
};

enum class AgentLocation { AtManager, AtHost };

struct SimulationWorld {
    RunConfig config;
    Rng rng;

    // Public board, available to every actor.
    GqPublicKey pub;
    std::vector<PublicIdentity> public_identities;
    SharingParams params;

    ManagerState manager;
    std::vector<HostProfile> hosts;  // one per hop
    AgentImage agent;
    AgentLocation location = AgentLocation::AtManager;
    std::size_t resident_hop = 0;

    TraceSink trace;
    std::vector<Message> log;
    std::map<std::pair<std::string, std::string>, uint64_t> seq_counters;

    // Attack state.
    bool forge_armed = false;
    bool replay_armed = false;
    std::map<std::size_t, std::vector<RoundTranscript>> recorded_transcripts;

    // Prover nonces drawn so far; never serialized, kept only so tests can
    // assert they appear in no message.
    std::vector<Bigint> nonce_audit;

    explicit SimulationWorld(const RunConfig& cfg) : config(cfg), rng(cfg.seed) {}

    const Message& post(MessageKind kind, const std::string& sender,
                        const std::string& receiver, Json body) {
        uint64_t& seq = seq_counters[{sender, receiver}];
        ++seq;
        log.push_back(Message{kind, sender, receiver, seq, std::move(body)});
        trace.record(message_to_json(log.back()));
        return log.back();
    }
};

struct EntryResult {
    std::size_t index = 0;
    std::size_t hop = 0;
    bool ok = false;
    std::string reason;  // verified | tag_mismatch | proof_invalid | identity_unknown
};

struct ScenarioVerdict {
    bool accepted = false;
    std::vector<RoundTranscript> rounds;
    std::optional<std::size_t> failed_round_index;
    std::vector<EntryResult> per_entry;
    std::optional<std::string> protocol_error;
};

namespace detail {

inline std::string identity_label(std::size_t hop, const std::string& host) {
    return "hop-" + std::to_string(hop) + ":" + host;
}

inline Json share_to_json(const Share& s) {
    return Json{{"index", s.index},
                {"value", to_decimal(s.value)},
                {"modulus", to_decimal(s.modulus)}};
}

inline Share share_from_json(const Json& j) {
    return Share{j.at("index").get<std::size_t>(),
                 from_decimal(j.at("value").get<std::string>()),
                 from_decimal(j.at("modulus").get<std::string>())};
}

}  // namespace detail

// Initial phase: keys, one identity + secret + dealt shares per hop, vaults
// bound to the expected state digest, host shares granted over the secure
// channel, public pairs placed on the board.
inline SimulationWorld setup(const RunConfig& cfg) {
    auto violations = validate_config(cfg);
    if (!violations.empty()) throw ConfigError(violations);

    SimulationWorld world(cfg);
    world.manager.keys = keygen(cfg.modulus_bits, world.rng, cfg.kp_floor);
    world.pub = world.manager.keys.pub();

    ModuliChain chain = gen_moduli_chain(cfg.sharing_m, cfg.sharing_t, world.pub.N, world.rng);
    world.params = SharingParams{chain, cfg.sharing_t, cfg.sharing_m};
    auto param_violations = validate_params(world.params, world.pub.N, cfg.strict_sharing);
    if (!param_violations.empty()) throw ConfigError(param_violations);

    // Initial agent state; the protected subset fixes the expected digest
    // for every hop (authorized transitions touch scratch vars only).
    AgentState state;
    state.code_id = digest(cfg.code);
    for (const auto& [name, value] : cfg.protected_vars) {
        state.vars[name] = value;
        state.protected_names.insert(name);
    }
    for (const auto& [name, value] : cfg.scratch_vars) state.vars[name] = value;
    world.manager.expected_digest = canonical_digest(state);
    world.agent.state = state;

    const std::size_t hop_count = cfg.itinerary.size();
    const std::size_t host_share_slots = cfg.sharing_m - cfg.sharing_t + 1;
    for (std::size_t k = 0; k < hop_count; ++k)
        world.hosts.push_back(HostProfile{cfg.itinerary[k].host, {}, cfg.itinerary[k].behavior});

    for (std::size_t k = 0; k < hop_count; ++k) {
        IdentityRecord record;
        record.id = detail::identity_label(k, cfg.itinerary[k].host);
        record.J = derive_J(record.id, world.pub.N);
        record.sigma = derive_secret(record.J, world.manager.keys);

        ShareSet set = deal(record.sigma.value, world.params, world.rng);
        world.agent.identities.push_back(PublicIdentity{record.id, record.J.value});
        world.agent.vaults.push_back(
            bind_shares(set.agent_shares(), world.manager.expected_digest));
        world.public_identities.push_back(PublicIdentity{record.id, record.J.value});

        auto grant = [&](std::size_t host_idx) {
            Share share = set.host_shares()[host_idx % host_share_slots];
            world.hosts[host_idx].granted[k] = share;
            world.post(MessageKind::ShareGrant, kManagerId, world.hosts[host_idx].id,
                       Json{{"hop", k},
                            {"identity", record.id},
                            {"share", detail::share_to_json(share)}});
        };
        if (cfg.extra_share_grants) {
            for (std::size_t j = 0; j < hop_count; ++j) grant(j);
        } else {
            grant(k);
        }

        world.manager.identities.push_back(std::move(record));
        world.manager.share_sets.push_back(std::move(set));
    }
    return world;
}

// Structural demonstration that hop verification is host-local: after this,
// scenario_host_verifies_agent must still work.
inline void disable_manager(SimulationWorld& world) {
    world.manager.keys.kp = 0;
    world.manager.keys.phi = 0;
    world.manager.identities.clear();
    world.manager.share_sets.clear();
    world.manager.disabled = true;
}

// Moves the agent along the itinerary. to_hop must be the next hop (or hop
// 0 when dispatching from the manager); the image travels serialized inside
// an AgentTransfer message and is decoded on arrival.
inline void migrate(SimulationWorld& world, std::size_t to_hop) {
    if (to_hop >= world.hosts.size())
        throw MigrationRejected("destination is not on the itinerary");
    std::string sender;
    if (world.location == AgentLocation::AtManager) {
        if (to_hop != 0) throw MigrationRejected("dispatch must target hop 0");
        sender = kManagerId;
    } else {
        if (to_hop != world.resident_hop + 1)
            throw MigrationRejected("hops must be visited in itinerary order");
        sender = world.hosts[world.resident_hop].id;
    }
    world.agent.state.hop_index = to_hop;
    const Message& m = world.post(MessageKind::AgentTransfer, sender, world.hosts[to_hop].id,
                                  Json{{"image", image_to_json(world.agent)}});
    world.agent = image_from_json(m.body.at("image"));
    world.location = AgentLocation::AtHost;
    world.resident_hop = to_hop;
}

inline void return_to_manager(SimulationWorld& world) {
    if (world.location != AgentLocation::AtHost)
        throw MigrationRejected("agent is not at a host");
    const Message& m =
        world.post(MessageKind::AgentTransfer, world.hosts[world.resident_hop].id, kManagerId,
                   Json{{"image", image_to_json(world.agent)}});
    world.agent = image_from_json(m.body.at("image"));
    world.location = AgentLocation::AtManager;
}

namespace detail {

// Prover strategies for the challenge rounds. The honest prover holds the
// reconstructed secret; the forger plays the optimal commit-time guess; the
// replayer echoes a previously accepted transcript.
struct RoundProver {
    virtual ~RoundProver() = default;
    virtual Bigint commit(SimulationWorld& world) = 0;
    virtual Bigint respond(SimulationWorld& world, const Bigint& b) = 0;
};

struct HonestProver : RoundProver {
    Residue sigma;
    Bigint nonce;
    HonestProver(Residue s) : sigma(std::move(s)) {}
    Bigint commit(SimulationWorld& world) override {
        Commitment c = prover_commit(world.pub, world.rng);
        nonce = c.r;
        world.nonce_audit.push_back(c.r);
        return c.u;
    }
    Bigint respond(SimulationWorld& world, const Bigint& b) override {
        return prover_respond(nonce, sigma, b, world.pub.N);
    }
};

struct ForgingProver : RoundProver {
    Residue J;
    Bigint w;
    ForgingProver(Residue j) : J(std::move(j)) {}
    Bigint commit(SimulationWorld& world) override {
        Bigint guess = world.config.challenge_space == ChallengeSpace::Binary
                           ? world.rng.below(2)
                           : world.rng.range(1, world.pub.N);
        w = world.rng.range(1, world.pub.N - 1);
        return mod_floor(modpow(J.value, guess, world.pub.N).value *
                             modpow(w, world.pub.Kp, world.pub.N).value,
                         world.pub.N);
    }
    Bigint respond(SimulationWorld&, const Bigint&) override { return w; }
};

struct ReplayProver : RoundProver {
    std::vector<RoundTranscript> recorded;
    std::size_t cursor = 0;
    ReplayProver(std::vector<RoundTranscript> r) : recorded(std::move(r)) {}
    Bigint commit(SimulationWorld&) override { return recorded[cursor].u; }
    Bigint respond(SimulationWorld&, const Bigint&) override {
        return recorded[cursor++].v;
    }
};

}  // namespace detail

// §-scenario 1: the resident host verifies the agent. The host offers its
// share, the agent reconstructs the hop secret from its state-bound vault
// plus that share, then `rounds` commit/challenge/response rounds run.
// Stops at the first failed round.
inline ScenarioVerdict scenario_host_verifies_agent(SimulationWorld& world, std::size_t hop,
                                                    std::size_t rounds) {
    if (world.location != AgentLocation::AtHost || world.resident_hop != hop)
        throw ParameterError("agent is not resident at the requested hop");
    HostProfile& host = world.hosts[hop];
    const std::string agent_id = "agent";
    ScenarioVerdict verdict;

    auto reject = [&](const std::string& why) {
        verdict.accepted = false;
        verdict.protocol_error = why;
        world.post(MessageKind::Verdict, host.id, kManagerId,
                   Json{{"hop", hop}, {"accepted", false}, {"protocol_error", why}});
        world.trace.record(Json{{"type", "verdict"},
                                {"scenario", "host_verifies_agent"},
                                {"hop", hop},
                                {"host", host.id},
                                {"accepted", false},
                                {"protocol_error", why}});
        world.forge_armed = false;
        world.replay_armed = false;
        return verdict;
    };

    // 1. The agent announces which identity this hop must use.
    if (hop >= world.agent.identities.size()) return reject("agent lacks identity for hop");
    world.post(MessageKind::IdentityAnnounce, agent_id, host.id,
               Json{{"hop", hop}, {"identity", world.agent.identities[hop].id}});
    if (world.public_identities[hop].id != world.agent.identities[hop].id)
        return reject("announced identity does not match the public board");
    Residue J{world.public_identities[hop].J, world.pub.N};

    // 2. The host offers its granted share for this hop.
    auto granted = host.granted.find(hop);
    if (granted == host.granted.end()) return reject("host holds no share for this hop");
    const Message& offer = world.post(MessageKind::ShareOffer, host.id, agent_id,
                                      Json{{"hop", hop},
                                           {"share", detail::share_to_json(granted->second)}});

    // Prover side: honest agent unless an attack is armed.
    std::unique_ptr<detail::RoundProver> prover;
    if (world.forge_armed) {
        prover = std::make_unique<detail::ForgingProver>(J);
    } else if (world.replay_armed) {
        prover = std::make_unique<detail::ReplayProver>(world.recorded_transcripts.at(hop));
    } else {
        try {
            Share offered = detail::share_from_json(offer.body.at("share"));
            Residue sigma = reconstruct_secret(world.agent, hop, offered, world.params,
                                               world.pub.N);
            prover = std::make_unique<detail::HonestProver>(sigma);
        } catch (const std::exception& e) {
            return reject(std::string("secret reconstruction failed: ") + e.what());
        }
    }

    // 3..6. Challenge rounds.
    verdict.accepted = true;
    for (std::size_t round = 0; round < rounds; ++round) {
        RoundTranscript t;
        t.u = prover->commit(world);
        world.post(MessageKind::Commit, agent_id, host.id, Json{{"u", to_decimal(t.u)}});
        t.b = verifier_challenge(world.pub.N, world.config.challenge_space, world.rng);
        world.post(MessageKind::Challenge, host.id, agent_id, Json{{"b", to_decimal(t.b)}});
        t.v = prover->respond(world, t.b);
        world.post(MessageKind::Response, agent_id, host.id, Json{{"v", to_decimal(t.v)}});
        t.accepted = verify_round(J, t.u, t.b, t.v, world.pub);
        verdict.rounds.push_back(t);
        if (!t.accepted) {
            verdict.accepted = false;
            verdict.failed_round_index = round;
            break;
        }
    }

    world.post(MessageKind::Verdict, host.id, kManagerId,
               Json{{"hop", hop},
                    {"accepted", verdict.accepted},
                    {"failed_round_index",
                     verdict.failed_round_index ? Json(*verdict.failed_round_index) : Json(nullptr)},
                    {"rounds", verdict.rounds.size()}});
    world.trace.record(Json{{"type", "verdict"},
                            {"scenario", "host_verifies_agent"},
                            {"hop", hop},
                            {"host", host.id},
                            {"accepted", verdict.accepted},
                            {"failed_round_index",
                             verdict.failed_round_index ? Json(*verdict.failed_round_index)
                                                        : Json(nullptr)},
                            {"rounds", verdict.rounds.size()}});

    if (verdict.accepted && !world.forge_armed && !world.replay_armed)
        world.recorded_transcripts[hop] = verdict.rounds;
    world.forge_armed = false;
    world.replay_armed = false;
    return verdict;
}

// §-scenario 2: back at the manager, every ledger entry is rechecked: the
// datum tag must match the payload and the proof congruence must hold under
// the hop's identity. The failing index set localizes tampered data.
inline ScenarioVerdict scenario_manager_verifies_ledger(SimulationWorld& world,
                                                        const AgentImage& image) {
    ScenarioVerdict verdict;
    verdict.accepted = true;
    for (std::size_t i = 0; i < image.ledger.size(); ++i) {
        const LedgerEntry& e = image.ledger[i];
        EntryResult r;
        r.index = i;
        r.hop = e.hop_index;
        if (e.hop_index >= world.public_identities.size()) {
            r.ok = false;
            r.reason = "identity_unknown";
        } else if (e.d != datum_tag(e.payload, world.pub.N)) {
            r.ok = false;
            r.reason = "tag_mismatch";
        } else {
            Residue J{world.public_identities[e.hop_index].J, world.pub.N};
            r.ok = verify_data_proof(J, e.d, e.u, e.v, world.pub);
            r.reason = r.ok ? "verified" : "proof_invalid";
        }
        verdict.accepted = verdict.accepted && r.ok;
        verdict.per_entry.push_back(r);
    }
    Json entries = Json::array();
    for (const auto& r : verdict.per_entry)
        entries.push_back(Json{{"index", r.index}, {"hop", r.hop}, {"ok", r.ok},
                               {"reason", r.reason}});
    world.trace.record(Json{{"type", "verdict"},
                            {"scenario", "manager_verifies_ledger"},
                            {"accepted", verdict.accepted},
                            {"entries", entries}});
    return verdict;
}

// Debug snapshot of the complete world state (including private material);
// used by determinism tests, never part of the wire format.
inline Json world_snapshot_json(const SimulationWorld& world) {
    Json identities = Json::array();
    for (const auto& ident : world.public_identities)
        identities.push_back(Json{{"id", ident.id}, {"J", to_decimal(ident.J)}});
    Json chain = Json::array();
    for (const auto& p : world.params.chain.primes) chain.push_back(to_decimal(p));
    Json hosts = Json::array();
    for (const auto& h : world.hosts) {
        Json grants = Json::array();
        for (const auto& [hop, share] : h.granted)
            grants.push_back(Json{{"hop", hop}, {"share", detail::share_to_json(share)}});
        hosts.push_back(Json{{"id", h.id}, {"granted", grants}});
    }
    Json secrets = Json::array();
    for (const auto& rec : world.manager.identities)
        secrets.push_back(to_decimal(rec.sigma.value));
    Json dealt = Json::array();
    for (const auto& set : world.manager.share_sets) dealt.push_back(to_decimal(set.s));
    return Json{{"N", to_decimal(world.pub.N)},
                {"Kp", to_decimal(world.pub.Kp)},
                {"kp", to_decimal(world.manager.keys.kp)},
                {"p0", to_decimal(world.params.chain.p0)},
                {"chain", chain},
                {"t", world.params.t},
                {"m", world.params.m},
                {"identities", identities},
                {"secrets", secrets},
                {"dealt", dealt},
                {"hosts", hosts},
                {"agent", image_to_json(world.agent)}};
}

}  // namespace agentproof

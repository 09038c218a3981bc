#pragma once

// The §-threat-model adversary: a malicious host that reads and mutates the
// resident agent's state and ledger, forges responses without the secret,
// or replays an earlier accepted transcript. Attacks mutate the world
// deterministically; detection happens (or not) in the ordinary scenarios.

#include <variant>
#include <vector>

#include "agentproof/protocol.hpp"

namespace agentproof {

struct ArmForge {};
struct ArmReplay {};

using AttackSpec = std::variant<TamperStateSpec, TamperLedgerSpec, ArmForge, ArmReplay>;

namespace detail {

inline void flip_bit(Bytes& data, std::size_t byte_offset, int bit) {
    if (byte_offset >= data.size())
        throw AttackSpecError("tamper byte offset out of range");
    if (bit < 0 || bit > 7) throw AttackSpecError("tamper bit must be 0..7");
    data[byte_offset] = static_cast<char>(data[byte_offset] ^ (1 << bit));
}

inline void apply_tamper_state(SimulationWorld& world, const TamperStateSpec& spec) {
    if (world.location != AgentLocation::AtHost)
        throw AttackSpecError("tamper_state requires a resident agent");
    AgentState& state = world.agent.state;
    TamperStateSpec chosen = spec;
    if (chosen.var.empty()) {
        // Random protected target, drawn from the world rng.
        std::vector<std::string> candidates;
        for (const auto& name : state.protected_names)
            if (state.vars.count(name) && !state.vars.at(name).empty())
                candidates.push_back(name);
        if (candidates.empty())
            throw AttackSpecError("no non-empty protected var to tamper");
        chosen.var = candidates[world.rng.below_u64(candidates.size())];
        chosen.byte_offset =
            static_cast<std::size_t>(world.rng.below_u64(state.vars.at(chosen.var).size()));
        chosen.bit = static_cast<int>(world.rng.below_u64(8));
    }
    auto it = state.vars.find(chosen.var);
    if (it == state.vars.end())
        throw AttackSpecError("tamper_state var does not exist: " + chosen.var);
    flip_bit(it->second, chosen.byte_offset, chosen.bit);
}

inline void apply_tamper_ledger(SimulationWorld& world, const TamperLedgerSpec& spec) {
    if (spec.entry >= world.agent.ledger.size())
        throw AttackSpecError("tamper_ledger entry index out of range");
    LedgerEntry& e = world.agent.ledger[spec.entry];
    auto mutate_value = [&](Bigint& value, const Bigint& modulus) {
        if (spec.set_value) {
            if (*spec.set_value == value)
                throw AttackSpecError("tamper_ledger set value equals current value");
            value = mod_floor(*spec.set_value, modulus);
        } else {
            Bigint flipped = value ^ pow2(static_cast<std::size_t>(spec.flip_bit));
            value = mod_floor(flipped, modulus);
        }
    };
    if (spec.field == "payload") {
        if (spec.set_payload) {
            if (*spec.set_payload == e.payload)
                throw AttackSpecError("tamper_ledger payload replacement is identical");
            e.payload = *spec.set_payload;
        } else {
            flip_bit(e.payload, spec.flip_byte, spec.flip_bit);
        }
    } else if (spec.field == "d") {
        if (spec.set_value) e.d = *spec.set_value;
        else e.d ^= pow2(static_cast<std::size_t>(spec.flip_bit));
    } else if (spec.field == "u") {
        mutate_value(e.u, world.pub.N);
    } else if (spec.field == "v") {
        mutate_value(e.v, world.pub.N);
    } else {
        throw AttackSpecError("tamper_ledger field must be payload|d|u|v");
    }
}

}  // namespace detail

// Applies each spec in order. An empty list leaves the world unchanged.
inline void apply_attack(SimulationWorld& world, const std::vector<AttackSpec>& specs) {
    for (const AttackSpec& spec : specs) {
        if (std::holds_alternative<TamperStateSpec>(spec)) {
            detail::apply_tamper_state(world, std::get<TamperStateSpec>(spec));
        } else if (std::holds_alternative<TamperLedgerSpec>(spec)) {
            detail::apply_tamper_ledger(world, std::get<TamperLedgerSpec>(spec));
        } else if (std::holds_alternative<ArmForge>(spec)) {
            if (world.location != AgentLocation::AtHost)
                throw AttackSpecError("forge_response requires a resident agent");
            world.forge_armed = true;
        } else {
            if (world.location != AgentLocation::AtHost)
                throw AttackSpecError("replay requires a resident agent");
            if (!world.recorded_transcripts.count(world.resident_hop))
                throw AttackSpecError("replay requires a recorded transcript for this hop");
            world.replay_armed = true;
        }
    }
}

// Collusion experiment: hosts pool their granted shares for `target_hop`.
// Returns true when the pooled shares suffice to reconstruct the hop
// secret, which with the dealing conditions alone happens as soon as t
// distinct share indices are pooled.
inline bool collusion_experiment(SimulationWorld& world, std::size_t target_hop) {
    if (target_hop >= world.manager.identities.size())
        throw ParameterError("collusion_experiment: unknown hop");
    std::map<std::size_t, Share> pooled;  // dedupe by index
    for (const auto& host : world.hosts) {
        auto it = host.granted.find(target_hop);
        if (it != host.granted.end()) pooled.emplace(it->second.index, it->second);
    }
    if (pooled.size() < world.params.t) return false;
    std::vector<Share> shares;
    for (const auto& [idx, share] : pooled) shares.push_back(share);
    Bigint reconstructed = combine(shares, world.params);
    return reconstructed == world.manager.identities[target_hop].sigma.value;
}

}  // namespace agentproof

#pragma once

// Run configuration: a single JSON document describing key sizes, sharing
// parameters, the itinerary with per-hop behaviors, and the data scripts.
// Everything a simulation does flows from this file plus the seed.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentproof/agent.hpp"
#include "agentproof/bigint.hpp"
#include "agentproof/errors.hpp"
#include "agentproof/gq.hpp"

namespace agentproof {

enum class BehaviorKind { Honest, TamperState, TamperLedger, ForgeResponse, Replay };

inline const char* behavior_kind_name(BehaviorKind k) {
    switch (k) {
        case BehaviorKind::Honest: return "honest";
        case BehaviorKind::TamperState: return "tamper_state";
        case BehaviorKind::TamperLedger: return "tamper_ledger";
        case BehaviorKind::ForgeResponse: return "forge_response";
        case BehaviorKind::Replay: return "replay";
    }
    throw InternalError("unknown behavior kind");
}

// Single-bit flip in an agent variable. An empty var name means "pick a
// random protected variable, byte and bit from the world rng" (used by
// attack campaigns).
struct TamperStateSpec {
    std::string var;
    std::size_t byte_offset = 0;
    int bit = 0;
};

struct TamperLedgerSpec {
    std::size_t entry = 0;
    std::string field;  // payload | d | u | v
    std::optional<Bytes> set_payload;
    std::optional<Bigint> set_value;
    std::size_t flip_byte = 0;
    int flip_bit = 0;
};

struct HostBehavior {
    BehaviorKind kind = BehaviorKind::Honest;
    std::optional<TamperStateSpec> tamper_state;
    std::optional<TamperLedgerSpec> tamper_ledger;
};

struct HopConfig {
    std::string host;
    HostBehavior behavior;
    std::vector<Bytes> inputs;              // fed to the FSM while resident
    std::vector<Bytes> data;                // payloads appended to the ledger
    std::optional<std::vector<Bytes>> alphabet;  // defaults to inputs
};

struct RunConfig {
    uint64_t seed = 1;
    std::size_t modulus_bits = 512;
    Bigint kp_floor = kDefaultKpFloor;
    std::size_t sharing_t = 4;
    std::size_t sharing_m = 8;
    std::size_t rounds = 10;
    ChallengeSpace challenge_space = ChallengeSpace::Full;
    bool strict_sharing = false;
    bool extra_share_grants = false;
    std::string code = "agent-code-v1";
    std::map<std::string, Bytes> protected_vars;
    std::map<std::string, Bytes> scratch_vars;
    std::vector<HopConfig> itinerary;
};

inline std::vector<std::string> validate_config(const RunConfig& cfg) {
    std::vector<std::string> v;
    if (cfg.itinerary.empty()) v.push_back("itinerary must be non-empty");
    if (cfg.rounds < 1) v.push_back("rounds must be >= 1");
    if (cfg.modulus_bits < 16) v.push_back("modulus_bits must be >= 16");
    if (cfg.sharing_t < 2) v.push_back("t must be >= 2");
    if (cfg.sharing_t > cfg.sharing_m) v.push_back("t must be <= m");
    if (cfg.protected_vars.count(kAccumulatorVar))
        v.push_back("accumulator var 'acc' cannot be protected");
    for (const auto& [name, value] : cfg.protected_vars)
        if (cfg.scratch_vars.count(name))
            v.push_back("var declared both protected and scratch: " + name);

    std::set<std::string> hosts_seen;
    for (std::size_t k = 0; k < cfg.itinerary.size(); ++k) {
        const HopConfig& hop = cfg.itinerary[k];
        std::string at = "itinerary[" + std::to_string(k) + "]";
        if (hop.host.empty()) v.push_back(at + ": host id empty");
        if (!hosts_seen.insert(hop.host).second)
            v.push_back(at + ": duplicate host id " + hop.host);
        if (hop.alphabet) {
            std::set<Bytes> alpha(hop.alphabet->begin(), hop.alphabet->end());
            for (const auto& in : hop.inputs)
                if (!alpha.count(in))
                    v.push_back(at + ": scripted input outside declared alphabet");
        }
        if (hop.behavior.kind == BehaviorKind::TamperState && hop.behavior.tamper_state) {
            const auto& spec = *hop.behavior.tamper_state;
            if (!spec.var.empty() && !cfg.protected_vars.count(spec.var))
                v.push_back(at + ": tamper_state target is not a protected var: " + spec.var);
        }
        if (hop.behavior.kind == BehaviorKind::TamperLedger && hop.behavior.tamper_ledger) {
            const std::string& f = hop.behavior.tamper_ledger->field;
            if (f != "payload" && f != "d" && f != "u" && f != "v")
                v.push_back(at + ": tamper_ledger field must be payload|d|u|v");
        }
    }
    return v;
}

inline HostBehavior behavior_from_json(const Json& j) {
    HostBehavior b;
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "honest") b.kind = BehaviorKind::Honest;
        else if (s == "forge_response") b.kind = BehaviorKind::ForgeResponse;
        else if (s == "replay") b.kind = BehaviorKind::Replay;
        else if (s == "tamper_state") {
            b.kind = BehaviorKind::TamperState;
            b.tamper_state = TamperStateSpec{};  // random target
        } else throw ConfigError({"unknown behavior: " + s});
        return b;
    }
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "tamper_state") {
        b.kind = BehaviorKind::TamperState;
        TamperStateSpec spec;
        spec.var = j.value("var", "");
        spec.byte_offset = j.value("byte", 0);
        spec.bit = j.value("bit", 0);
        b.tamper_state = spec;
    } else if (kind == "tamper_ledger") {
        b.kind = BehaviorKind::TamperLedger;
        TamperLedgerSpec spec;
        spec.entry = j.at("entry").get<std::size_t>();
        spec.field = j.at("field").get<std::string>();
        if (j.contains("set_hex")) spec.set_payload = bytes_from_hex(j.at("set_hex"));
        if (j.contains("set_dec")) spec.set_value = from_decimal(j.at("set_dec"));
        spec.flip_byte = j.value("flip_byte", 0);
        spec.flip_bit = j.value("flip_bit", 0);
        b.tamper_ledger = spec;
    } else {
        throw ConfigError({"unknown behavior kind: " + kind});
    }
    return b;
}

inline Json behavior_to_json(const HostBehavior& b) {
    switch (b.kind) {
        case BehaviorKind::Honest: return "honest";
        case BehaviorKind::ForgeResponse: return "forge_response";
        case BehaviorKind::Replay: return "replay";
        case BehaviorKind::TamperState: {
            const TamperStateSpec spec = b.tamper_state.value_or(TamperStateSpec{});
            if (spec.var.empty()) return "tamper_state";
            return Json{{"kind", "tamper_state"},
                        {"var", spec.var},
                        {"byte", spec.byte_offset},
                        {"bit", spec.bit}};
        }
        case BehaviorKind::TamperLedger: {
            const TamperLedgerSpec& spec = *b.tamper_ledger;
            Json j{{"kind", "tamper_ledger"}, {"entry", spec.entry}, {"field", spec.field}};
            if (spec.set_payload) j["set_hex"] = bytes_to_hex(*spec.set_payload);
            if (spec.set_value) j["set_dec"] = to_decimal(*spec.set_value);
            j["flip_byte"] = spec.flip_byte;
            j["flip_bit"] = spec.flip_bit;
            return j;
        }
    }
    throw InternalError("unknown behavior kind");
}

inline RunConfig config_from_json(const Json& j) {
    RunConfig cfg;
    try {
        cfg.seed = j.value("seed", uint64_t{1});
        cfg.modulus_bits = j.value("modulus_bits", std::size_t{512});
        if (j.contains("kp_floor")) cfg.kp_floor = from_decimal(j.at("kp_floor").get<std::string>());
        if (j.contains("sharing")) {
            cfg.sharing_t = j.at("sharing").value("t", std::size_t{4});
            cfg.sharing_m = j.at("sharing").value("m", std::size_t{8});
        }
        cfg.rounds = j.value("rounds", std::size_t{10});
        std::string space = j.value("challenge_space", "full");
        if (space == "full") cfg.challenge_space = ChallengeSpace::Full;
        else if (space == "binary") cfg.challenge_space = ChallengeSpace::Binary;
        else throw ConfigError({"challenge_space must be full|binary"});
        cfg.strict_sharing = j.value("strict_sharing", false);
        cfg.extra_share_grants = j.value("extra_share_grants", false);
        if (j.contains("agent")) {
            const Json& a = j.at("agent");
            cfg.code = a.value("code", cfg.code);
            if (a.contains("protected_vars"))
                for (const auto& [name, val] : a.at("protected_vars").items())
                    cfg.protected_vars[name] = val.get<std::string>();
            if (a.contains("scratch_vars"))
                for (const auto& [name, val] : a.at("scratch_vars").items())
                    cfg.scratch_vars[name] = val.get<std::string>();
        }
        for (const auto& hj : j.value("itinerary", Json::array())) {
            HopConfig hop;
            hop.host = hj.at("host").get<std::string>();
            if (hj.contains("behavior")) hop.behavior = behavior_from_json(hj.at("behavior"));
            for (const auto& in : hj.value("inputs", Json::array()))
                hop.inputs.push_back(in.get<std::string>());
            for (const auto& d : hj.value("data", Json::array()))
                hop.data.push_back(d.get<std::string>());
            if (hj.contains("alphabet")) {
                std::vector<Bytes> alpha;
                for (const auto& a : hj.at("alphabet")) alpha.push_back(a.get<std::string>());
                hop.alphabet = std::move(alpha);
            }
            cfg.itinerary.push_back(std::move(hop));
        }
    } catch (const Json::exception& e) {
        throw ConfigError({std::string("malformed config JSON: ") + e.what()});
    }
    auto violations = validate_config(cfg);
    if (!violations.empty()) throw ConfigError(violations);
    return cfg;
}

inline Json config_to_json(const RunConfig& cfg) {
    Json itinerary = Json::array();
    for (const auto& hop : cfg.itinerary) {
        Json hj{{"host", hop.host}, {"behavior", behavior_to_json(hop.behavior)}};
        hj["inputs"] = hop.inputs;
        hj["data"] = hop.data;
        if (hop.alphabet) hj["alphabet"] = *hop.alphabet;
        itinerary.push_back(hj);
    }
    Json agent{{"code", cfg.code},
               {"protected_vars", cfg.protected_vars},
               {"scratch_vars", cfg.scratch_vars}};
    return Json{{"seed", cfg.seed},
                {"modulus_bits", cfg.modulus_bits},
                {"kp_floor", to_decimal(cfg.kp_floor)},
                {"sharing", Json{{"t", cfg.sharing_t}, {"m", cfg.sharing_m}}},
                {"rounds", cfg.rounds},
                {"challenge_space", challenge_space_name(cfg.challenge_space)},
                {"strict_sharing", cfg.strict_sharing},
                {"extra_share_grants", cfg.extra_share_grants},
                {"agent", agent},
                {"itinerary", itinerary}};
}

inline RunConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file: " + path});
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
    }
    return config_from_json(j);
}

}  // namespace agentproof

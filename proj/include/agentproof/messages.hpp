#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "agentproof/errors.hpp"

namespace agentproof {

using Json = nlohmann::ordered_json;

enum class MessageKind {
    ShareGrant,
    IdentityAnnounce,
    ShareOffer,
    Commit,
    Challenge,
    Response,
    Verdict,
    AgentTransfer,
};

inline const char* message_kind_name(MessageKind k) {
    switch (k) {
        case MessageKind::ShareGrant: return "ShareGrant";
        case MessageKind::IdentityAnnounce: return "IdentityAnnounce";
        case MessageKind::ShareOffer: return "ShareOffer";
        case MessageKind::Commit: return "Commit";
        case MessageKind::Challenge: return "Challenge";
        case MessageKind::Response: return "Response";
        case MessageKind::Verdict: return "Verdict";
        case MessageKind::AgentTransfer: return "AgentTransfer";
    }
    throw InternalError("unknown message kind");
}

// Simulated channel message. Bodies are structured JSON with decimal-string
// integers; the prover nonce r must never appear in any body. seq is
// assigned per (sender, receiver) channel and strictly increases.
struct Message {
    MessageKind kind;
    std::string sender;
    std::string receiver;
    uint64_t seq = 0;
    Json body;
};

inline Json message_to_json(const Message& m) {
    return Json{{"type", "message"},
                {"kind", message_kind_name(m.kind)},
                {"sender", m.sender},
                {"receiver", m.receiver},
                {"seq", m.seq},
                {"body", m.body}};
}

}  // namespace agentproof

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "agentproof/bigint.hpp"

namespace agentproof {

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// gcd(a, modulus) != 1; carries the offending gcd.
struct NotInvertibleError : std::domain_error {
    NotInvertibleError(Bigint g_, const std::string& what)
        : std::domain_error(what), g(std::move(g_)) {}
    Bigint g;
};

struct ThresholdNotMetError : std::runtime_error {
    ThresholdNotMetError(std::size_t needed_, std::size_t got_)
        : std::runtime_error("combiner needs " + std::to_string(needed_) +
                             " shares, got " + std::to_string(got_)),
          needed(needed_), got(got_) {}
    std::size_t needed, got;
};

struct DealError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TransitionRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MigrationRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AttackSpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when the agent cannot produce a self-consistent data proof, i.e.
// its reconstructed secret no longer matches its public identity.
struct StateCorrupt : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> violations_)
        : std::runtime_error(join(violations_)), violations(std::move(violations_)) {}
    std::vector<std::string> violations;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "config invalid:";
        for (const auto& x : v) s += " [" + x + "]";
        return s;
    }
};

}  // namespace agentproof

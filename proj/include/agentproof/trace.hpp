#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace agentproof {

// Newline-delimited structured records: one per message, one per verdict.
// Records are dumped immediately so the byte stream is independent of any
// later state, and identical configs + seeds produce identical bytes.
class TraceSink {
public:
    void record(const nlohmann::ordered_json& j) { lines_.push_back(j.dump()); }

    std::string str() const {
        std::string out;
        for (const auto& line : lines_) {
            out += line;
            out += '\n';
        }
        return out;
    }

    void write_to(std::ostream& os) const {
        for (const auto& line : lines_) os << line << '\n';
    }

    const std::vector<std::string>& lines() const { return lines_; }
    std::size_t size() const { return lines_.size(); }

private:
    std::vector<std::string> lines_;
};

}  // namespace agentproof

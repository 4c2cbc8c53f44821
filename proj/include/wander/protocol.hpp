#pragma once

#include "wander/feedback.hpp"
#include "wander/nav.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

// Wire messages exchanged over the /session socket. Every message carries a
// per-direction, strictly increasing `seq`.
namespace wander::wire {

inline constexpr int kProtocolVersion = 1;

struct Inbound {
    std::string type;  // "utterance" or "select"
    std::int64_t seq = 0;
    nlohmann::json body;
};

// Throws ParseError with a human-readable reason.
Inbound parse_inbound(std::string_view raw);

nlohmann::json hello(std::int64_t seq, const std::string& session_id, double tick_rate);
nlohmann::json feedback(std::int64_t seq, std::int64_t re, const FeedbackBundle& bundle);
nlohmann::json pose(std::int64_t seq, double t, Vec2 guide, Vec2 visitor, const MinimapState& map,
                    const std::optional<SignpostState>& sign);
nlohmann::json arrival(std::int64_t seq, double t, const std::string& artwork);
nlohmann::json error(std::int64_t seq, std::optional<std::int64_t> re, const std::string& reason);

}  // namespace wander::wire

#pragma once

#include "wander/pipeline.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wander {

enum class BotId { Explorer, Navigator, Identifier };

std::string_view to_string(BotId bot);

struct RegionMention {
    std::string name;
    int importance = 1;  // 1..3
    friend bool operator==(const RegionMention&, const RegionMention&) = default;
};

// Validated stage-2 output. Tours hold world ids only; regions name regions of
// the session landmark only.
struct BotResponse {
    std::string response;
    std::optional<std::string> context;
    std::optional<std::string> landmark;
    std::vector<std::string> tasks;
    std::optional<std::vector<std::string>> tours;
    std::optional<std::vector<RegionMention>> regions;
    bool degraded = false;  // model output could not be parsed; `response` is the raw text
};

// Navigation beats information enhancement beats personalized preference.
// Throws PreconditionError for an empty set.
BotId arbitrate(const TaskSet& tasks);

// Stage-filtered bot template rendered with the frame's slots.
std::string render_bot_prompt(const PromptTemplate& tmpl, const ContextFrame& frame);

// Structural validation of a parsed bot reply. Keys are matched
// case-insensitively; unresolvable tours and unknown regions are dropped.
BotResponse parse_bot_response(const nlohmann::json& doc, const Session& session, const MuseumWorld& world);

// Throw GatewayFailure. A reply that cannot be repaired into JSON comes back
// as a degraded response.
BotResponse run_explorer(const ContextFrame& frame, const Session& session, const MuseumWorld& world,
                         ChatBackend& backend, const PromptTemplate& tmpl);

// Additionally throws NoResolvableTarget when neither the reply nor the
// utterance names a destination.
BotResponse run_navigator(const ContextFrame& frame, const Session& session, const MuseumWorld& world,
                          ChatBackend& backend, const PromptTemplate& tmpl);

// Stores the utterance as a preference before asking the model. Gateway
// failures degrade to a canned acknowledgment.
BotResponse run_identifier(const ContextFrame& frame, Session& session, ChatBackend& backend,
                           const PromptTemplate& tmpl);

inline constexpr std::string_view kPreferenceAck = "Noted your preference.";

}  // namespace wander

#pragma once

#include "wander/bots.hpp"
#include "wander/feedback.hpp"
#include "wander/nav.hpp"
#include "wander/pipeline.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wander {

// Everything one utterance produced. The session snapshot passed in is never
// modified; `events` carry the state changes for the caller to apply.
struct TurnOutcome {
    std::string utterance;
    FeedbackBundle bundle;
    std::optional<ContextFrame> frame;
    std::optional<BotId> bot;
    std::optional<BotResponse> response;
    std::optional<Failure> failure;
    std::vector<std::string> stops;  // navigation destinations in visiting order
    std::optional<Path> path;        // first leg, from the visitor position
    std::vector<SessionEvent> events;
};

// Both stages of the pipeline for one utterance. Safe to call from several
// threads at once as long as the backend is.
class Engine {
public:
    Engine(const MuseumWorld& world, const VisitStats* stats, ChatBackend& backend, const PromptSet& prompts,
           ComposeOptions options = {});

    TurnOutcome run_turn(const Session& snapshot, std::string_view utterance) const;

    const MuseumWorld& world() const { return world_; }

private:
    const MuseumWorld& world_;
    const VisitStats* stats_;
    ChatBackend& backend_;
    const PromptSet& prompts_;
    ComposeOptions options_;
};

}  // namespace wander

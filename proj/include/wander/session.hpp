#pragma once

#include "wander/geometry.hpp"
#include "wander/world.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wander {

enum class StageKind { Beginning, InProgress, Ending };

std::string_view to_string(StageKind stage);

struct Turn {
    std::string speaker;  // "visitor" or "guide"
    std::string text;
    friend bool operator==(const Turn&, const Turn&) = default;
};

// Per-visitor tour state. Mutated only on the session's own loop.
struct Session {
    std::string id;
    Vec2 visitor_pos;
    Vec2 guide_pos;
    std::optional<std::string> landmark;  // artwork id being viewed
    std::vector<std::string> history;     // append-only, no consecutive repeats
    std::vector<std::string> preferences;
    std::optional<std::vector<std::string>> planned_tour;
    std::vector<Turn> conversation;
    bool walking = false;
    std::vector<Vec2> path;  // active waypoints; non-empty iff walking
    double clock = 0.0;

    friend bool operator==(const Session&, const Session&) = default;
};

// Fresh session standing at the museum spawn.
Session make_session(std::string id, const MuseumWorld& world);

// Beginning with an empty history; Ending on a summary request or once every
// planned stop was visited; InProgress otherwise.
StageKind infer_stage(const Session& session, bool summary_intent);

// Visitor stopped in front of an artwork. Throws UnknownArtwork.
void record_arrival(Session& session, const MuseumWorld& world, std::string_view artwork_id,
                    VisitStats* stats = nullptr);

// Throws EmptyStatement for blank input.
void add_preference(Session& session, std::string statement);

void start_walking(Session& session, std::vector<Vec2> waypoints);
void stop_walking(Session& session);

// ---------------------------------------------------------------------------
// Event log. Every persistent session change is one of these; replaying a log
// onto a fresh session reproduces the state.

struct UtteranceEvent {
    std::string text;
};
struct ArrivalEvent {
    std::string artwork;
    std::optional<Vec2> visitor;
    std::optional<Vec2> guide;
};
struct PreferenceEvent {
    std::string text;
};
struct FeedbackEvent {
    std::string combo;
    std::string voice;
    std::optional<std::vector<std::string>> planned_tour;
};

struct SessionEvent {
    double t = 0.0;
    std::variant<UtteranceEvent, ArrivalEvent, PreferenceEvent, FeedbackEvent> body;
};

nlohmann::json to_json(const SessionEvent& event);
SessionEvent event_from_json(const nlohmann::json& line);

void apply_event(Session& session, const SessionEvent& event, const MuseumWorld& world,
                 VisitStats* stats = nullptr);

// Reads JSON-lines from `in` and folds them over make_session(id, world).
Session replay_events(std::istream& in, std::string id, const MuseumWorld& world);

}  // namespace wander

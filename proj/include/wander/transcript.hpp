#pragma once

#include "wander/engine.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wander {

// Structural assertions for one replayed turn. Unset fields are not checked.
struct TurnExpectation {
    std::optional<std::string> combo;
    std::optional<std::vector<std::string>> tours;
    std::optional<std::string> landmark;
    std::optional<std::vector<std::string>> tasks;
    std::vector<std::string> virtual_screen_includes;
};

struct TranscriptTurn {
    std::string utterance;
    std::optional<nlohmann::json> setup;  // resets the session before this turn
    TurnExpectation expect;
};

// Paths are resolved relative to the transcript file.
struct Transcript {
    std::filesystem::path museum;
    std::filesystem::path rules;
    std::filesystem::path prompts;
    std::vector<TranscriptTurn> turns;
};

Transcript load_transcript(const std::filesystem::path& path);

// Session setup used by transcripts and tests:
//   {"position": [x, y] | {"at": "painting 007"}, "landmark": id | null,
//    "history": [...], "preferences": [...], "planned_tour": [...]}
// "at" places the visitor on the artwork's viewing cell and, unless given
// explicitly, makes it the landmark.
Session session_from_setup(const nlohmann::json& setup, std::string id, const MuseumWorld& world);

struct TurnReport {
    std::string utterance;
    bool passed = true;
    std::vector<std::string> diffs;
};

struct ReplayReport {
    std::vector<TurnReport> turns;
    double seconds = 0.0;

    std::size_t passed() const;
    bool ok() const { return passed() == turns.size(); }
};

// Checks one outcome against its expectation.
TurnReport check_turn(const TranscriptTurn& turn, const TurnOutcome& outcome);

// Runs every turn with the scripted backend and writes a per-turn report to
// `out`.
ReplayReport replay_transcript(const Transcript& transcript, std::ostream& out);

}  // namespace wander

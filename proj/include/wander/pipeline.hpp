#pragma once

#include "wander/gateway.hpp"
#include "wander/prompt.hpp"
#include "wander/session.hpp"
#include "wander/world.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wander {

enum class TaskKind { InformationEnhancement, PersonalizedPreference, Navigation };
enum class InfoKind { Spatial, Semantic, Social };

using TaskSet = std::set<TaskKind>;
using InfoSet = std::set<InfoKind>;

std::string_view to_string(TaskKind task);
std::string_view to_string(InfoKind info);
std::optional<TaskKind> parse_task_label(std::string_view label);
std::optional<InfoKind> parse_info_label(std::string_view label);

// How many artworks a popularity or proximity lookup contributes to a prompt.
inline constexpr std::size_t kCandidateLimit = 8;

struct Classification {
    TaskSet tasks;
    bool summary_intent = false;
};

struct Compilation {
    InfoSet info;
    std::vector<std::string> referenced;  // artwork ids the compiler named
};

// Stage-1 result handed to the stage-2 bots.
struct ContextFrame {
    std::string utterance;
    TaskSet tasks;
    InfoSet info;
    StageKind stage = StageKind::Beginning;
    SlotMap related;
    bool summary_intent = false;
    std::vector<std::string> named;       // ids named in the utterance or by the compiler
    std::vector<std::string> candidates;  // ids whose records entered `related`
};

// Shared, read-only collaborators for one utterance.
struct PipelineContext {
    const MuseumWorld& world;
    const VisitStats* stats;
    ChatBackend& backend;
    const PromptSet& prompts;
};

// The user turn every bot sees:
//   Question: ...
//   Position: (x, y)
//   Landmark: "painting 000" | null
//   History: ['painting 005', ...] | null
std::string question_frame(std::string_view utterance, const Session& session);

// Parses a label list from model output: a JSON/Python list, or an object
// holding the list under `key`. Unparseable output yields an empty list.
std::vector<std::string> parse_labels(std::string_view raw, std::string_view key);

// Classifier bot. Unknown labels are dropped; an empty result defaults to
// {InformationEnhancement}. A "summary" label sets summary_intent.
// Throws GatewayFailure.
Classification classify(std::string_view utterance, const Session& session, const PipelineContext& ctx);

// Compiler bot: which kinds of information the stage-2 bot needs.
// Throws GatewayFailure.
Compilation compile(std::string_view utterance, const TaskSet& tasks, const Session& session,
                    const PipelineContext& ctx);

// Deterministic slot materialization from the compiled information kinds.
// Always fills visitor_position, landmark, history, preferences, stage,
// target_position and related_info; each requested kind adds its own block.
SlotMap materialize_slots(const InfoSet& info, const std::vector<std::string>& named, StageKind stage,
                          const Session& session, const MuseumWorld& world, const VisitStats* stats,
                          std::vector<std::string>* candidates_out = nullptr);

// classify + compile + stage inference + slot materialization.
ContextFrame identify_context(std::string_view utterance, const Session& session, const PipelineContext& ctx);

}  // namespace wander

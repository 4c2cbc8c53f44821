#pragma once

#include "wander/bots.hpp"
#include "wander/nav.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wander {

enum class ComboId { C1, C2, C3, C4, C5 };

std::string_view to_string(ComboId combo);
std::optional<ComboId> parse_combo(std::string_view s);

enum class Pose { Idle, Speak, Point, Walk };

std::string_view to_string(Pose pose);

struct AvatarDirective {
    Pose pose = Pose::Speak;
    std::optional<std::string> target;  // artwork id for Point and Walk
    bool face_visitor = true;
};

struct TextWindow {
    std::string text;
    std::string placement = "front-right";
    bool translucent = true;
};

struct Highlight {
    std::string artwork;
    std::string region;
    std::array<double, 4> rect{};
    int tier = 1;
    double reveal_at = 0.0;  // seconds into the narration
};

struct FeedbackBundle {
    ComboId combo = ComboId::C1;
    std::string voice;
    AvatarDirective avatar;
    std::optional<TextWindow> text_window;
    std::optional<std::vector<Highlight>> highlights;
    std::optional<std::vector<std::string>> virtual_screen;
    std::optional<MinimapState> minimap;
    std::optional<SignpostState> signpost;
    std::string echo;
};

inline constexpr int kBundleSchema = 1;
inline constexpr double kSpeechRate = 15.0;  // characters per second

// Highlight border colour per importance tier.
std::string_view tier_color(int tier);

// C5 for the Navigator, C1 for the Identifier. For the Explorer: regions give
// C3, any tour stop other than the landmark gives C4, anything else C2.
ComboId select_combo(BotId bot, const BotResponse& resp, const std::optional<std::string>& landmark);

// True when exactly the channels of the bundle's combo are present.
bool channels_match(const FeedbackBundle& bundle);

struct ComposeOptions {
    double speech_rate = kSpeechRate;
};

// Builds the bundle for a validated bot response. For C5 the session must
// already be walking toward the first tour stop.
FeedbackBundle compose(const ContextFrame& frame, BotId bot, const BotResponse& resp, const Session& session,
                       const MuseumWorld& world, const ComposeOptions& options = {});

struct Failure {
    enum class Kind { Timeout, Backend, Repair, NoTarget, Unreachable };
    Kind kind = Kind::Backend;
    std::string detail;  // raw reply, request text or artwork name
};

inline constexpr std::string_view kRetryPrompt = "I did not catch that — could you ask again?";

// Voice-only apology for a turn that could not be served.
FeedbackBundle fallback(std::string_view utterance, const Failure& failure);

nlohmann::json to_json(const FeedbackBundle& bundle);

}  // namespace wander

#include "wander/feedback.hpp"

#include "wander/errors.hpp"
#include "wander/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <tuple>

namespace wander {

using nlohmann::json;

std::string_view to_string(ComboId combo)
{
    switch (combo) {
    case ComboId::C1: return "C1";
    case ComboId::C2: return "C2";
    case ComboId::C3: return "C3";
    case ComboId::C4: return "C4";
    case ComboId::C5: return "C5";
    }
    return "C1";
}

std::optional<ComboId> parse_combo(std::string_view s)
{
    for (auto c : {ComboId::C1, ComboId::C2, ComboId::C3, ComboId::C4, ComboId::C5})
        if (text::ascii_lower(to_string(c)) == text::ascii_lower(s)) return c;
    return std::nullopt;
}

std::string_view to_string(Pose pose)
{
    switch (pose) {
    case Pose::Idle: return "idle";
    case Pose::Speak: return "speak";
    case Pose::Point: return "point";
    case Pose::Walk: return "walk";
    }
    return "idle";
}

std::string_view tier_color(int tier)
{
    if (tier >= 3) return "dark_red";
    if (tier == 2) return "red";
    return "orange";
}

ComboId select_combo(BotId bot, const BotResponse& resp, const std::optional<std::string>& landmark)
{
    if (bot == BotId::Navigator) return ComboId::C5;
    if (bot == BotId::Identifier) return ComboId::C1;
    if (resp.regions && !resp.regions->empty()) return ComboId::C3;
    if (resp.tours && std::any_of(resp.tours->begin(), resp.tours->end(),
                                  [&](const auto& id) { return !landmark || id != *landmark; }))
        return ComboId::C4;
    return ComboId::C2;
}

bool channels_match(const FeedbackBundle& b)
{
    const bool tw = b.text_window.has_value();
    const bool hl = b.highlights.has_value();
    const bool vs = b.virtual_screen.has_value();
    const bool nav = b.minimap.has_value() && b.signpost.has_value();
    const bool any_nav = b.minimap.has_value() || b.signpost.has_value();
    switch (b.combo) {
    case ComboId::C1: return !tw && !hl && !vs && !any_nav;
    case ComboId::C2: return tw && !hl && !vs && !any_nav;
    case ComboId::C3: return tw && hl && !vs && !any_nav;
    case ComboId::C4: return tw && !hl && vs && !any_nav;
    case ComboId::C5: return !tw && !hl && !vs && nav;
    }
    return false;
}

namespace {

std::string first_sentences(std::string_view s, std::size_t n)
{
    auto parts = text::sentences(s);
    std::string out;
    for (std::size_t i = 0; i < parts.size() && i < n; ++i) out += (out.empty() ? "" : " ") + parts[i];
    return out.empty() ? text::trim(s) : out;
}

// Earliest whole-word mention of the artwork (id or name) in normalized text.
std::size_t mention_at(const std::string& normalized, const Artwork& a)
{
    return std::min(text::find_word(normalized, text::normalize(a.id)),
                    text::find_word(normalized, text::normalize(a.name)));
}

std::vector<std::string> screen_order(const BotResponse& resp, const MuseumWorld& world)
{
    const auto context = text::normalize(resp.context.value_or(""));
    const auto voice = text::normalize(resp.response);
    constexpr auto npos = std::string::npos;

    std::vector<std::tuple<int, std::size_t, std::size_t, std::string>> keyed;
    for (std::size_t i = 0; i < resp.tours->size(); ++i) {
        const auto& id = (*resp.tours)[i];
        const auto* a = world.find_artwork(id);
        int source = 2;
        std::size_t pos = npos;
        if (a) {
            if (auto p = mention_at(context, *a); p != npos) source = 0, pos = p;
            else if (auto q = mention_at(voice, *a); q != npos) source = 1, pos = q;
        }
        keyed.emplace_back(source, pos, i, id);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::string> out;
    for (auto& k : keyed) out.push_back(std::get<3>(k));
    return out;
}

bool speaks_about(const std::string& voice, const BotResponse& resp, const Artwork& landmark)
{
    if (mention_at(text::normalize(voice), landmark) != std::string::npos) return true;
    return resp.landmark && text::normalize(*resp.landmark) == text::normalize(landmark.name);
}

}  // namespace

FeedbackBundle compose(const ContextFrame& frame, BotId bot, const BotResponse& resp, const Session& session,
                       const MuseumWorld& world, const ComposeOptions& options)
{
    FeedbackBundle b;
    b.combo = select_combo(bot, resp, session.landmark);
    b.echo = frame.utterance;
    b.voice = b.combo == ComboId::C5 ? first_sentences(resp.response, 2) : resp.response;

    const Artwork* landmark = session.landmark ? world.find_artwork(*session.landmark) : nullptr;

    if (b.combo == ComboId::C5) {
        if (!resp.tours || resp.tours->empty()) throw PreconditionError("compose: navigation response without tours");
        const auto* dest = world.find_artwork(resp.tours->front());
        if (!dest) throw UnknownArtwork(resp.tours->front());
        b.avatar = {Pose::Walk, dest->id, false};
        b.minimap = minimap(world, session);
        const Vec2 goal = session.path.empty() ? world.viewing_point(*dest) : session.path.back();
        try {
            b.signpost = signpost(session.visitor_pos, goal);
        } catch (const DegenerateDirection&) {
            b.signpost = SignpostState{};
        }
        return b;
    }

    if (landmark && (b.combo == ComboId::C3 || speaks_about(b.voice, resp, *landmark)))
        b.avatar = {Pose::Point, landmark->id, true};
    else
        b.avatar = {Pose::Speak, std::nullopt, true};

    if (b.combo == ComboId::C1) return b;

    TextWindow window;
    window.text = resp.context && !text::is_blank(*resp.context) ? *resp.context : first_sentences(resp.response, 2);
    b.text_window = window;

    if (b.combo == ComboId::C3) {
        const auto lowered = text::ascii_lower(b.voice);
        std::vector<Highlight> hl;
        for (const auto& r : *resp.regions) {
            const auto* region = landmark->find_region(r.name);
            const auto at = lowered.find(text::ascii_lower(r.name));
            const double chars = at == std::string::npos ? static_cast<double>(b.voice.size()) : static_cast<double>(at);
            hl.push_back({landmark->id, region->name, region->rect, r.importance, chars / options.speech_rate});
        }
        std::stable_sort(hl.begin(), hl.end(), [](const auto& a, const auto& c) { return a.reveal_at < c.reveal_at; });
        b.highlights = std::move(hl);
    } else if (b.combo == ComboId::C4) {
        b.virtual_screen = screen_order(resp, world);
    }
    return b;
}

FeedbackBundle fallback(std::string_view utterance, const Failure& failure)
{
    FeedbackBundle b;
    b.combo = ComboId::C1;
    b.echo = std::string(utterance);
    b.avatar = {Pose::Speak, std::nullopt, true};
    switch (failure.kind) {
    case Failure::Kind::Timeout:
    case Failure::Kind::Backend:
        b.voice = std::string(kRetryPrompt);
        break;
    case Failure::Kind::Repair: {
        const auto prose = text::trim(failure.detail);
        const bool salvageable = !prose.empty() && prose.find_first_of("{[") == std::string::npos;
        b.voice = salvageable ? prose : std::string(kRetryPrompt);
        break;
    }
    case Failure::Kind::NoTarget:
        b.voice = fmt::format("Sorry, I could not work out where to take you for \"{}\". Could you name the painting?",
                              failure.detail);
        break;
    case Failure::Kind::Unreachable:
        b.voice = fmt::format("Sorry, there is no way to reach {} from here.", failure.detail);
        break;
    }
    return b;
}

json to_json(const FeedbackBundle& b)
{
    json j;
    j["schema"] = kBundleSchema;
    j["combo"] = to_string(b.combo);
    j["voice"] = b.voice;
    j["avatar"] = {{"pose", to_string(b.avatar.pose)},
                   {"target", b.avatar.target ? json(*b.avatar.target) : json(nullptr)},
                   {"face_visitor", b.avatar.face_visitor}};
    j["text_window"] = b.text_window ? json{{"text", b.text_window->text},
                                            {"placement", b.text_window->placement},
                                            {"translucent", b.text_window->translucent}}
                                     : json(nullptr);
    if (b.highlights) {
        auto list = json::array();
        for (const auto& h : *b.highlights)
            list.push_back({{"artwork", h.artwork},
                            {"region", h.region},
                            {"rect", h.rect},
                            {"tier", h.tier},
                            {"color", tier_color(h.tier)},
                            {"reveal_at", h.reveal_at}});
        j["highlights"] = list;
    } else {
        j["highlights"] = nullptr;
    }
    j["virtual_screen"] = b.virtual_screen ? json(*b.virtual_screen) : json(nullptr);
    j["minimap"] = b.minimap ? to_json(*b.minimap) : json(nullptr);
    j["signpost"] = b.signpost ? to_json(*b.signpost) : json(nullptr);
    j["echo"] = b.echo;
    return j;
}

}  // namespace wander

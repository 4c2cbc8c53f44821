#include "wander/bots.hpp"

#include "wander/errors.hpp"
#include "wander/json_repair.hpp"
#include "wander/text.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace wander {

using nlohmann::json;

std::string_view to_string(BotId bot)
{
    switch (bot) {
    case BotId::Explorer: return "explorer";
    case BotId::Navigator: return "navigator";
    case BotId::Identifier: return "identifier";
    }
    return "explorer";
}

BotId arbitrate(const TaskSet& tasks)
{
    if (tasks.empty()) throw PreconditionError("arbitrate: empty task set");
    if (tasks.count(TaskKind::Navigation)) return BotId::Navigator;
    if (tasks.count(TaskKind::InformationEnhancement)) return BotId::Explorer;
    return BotId::Identifier;
}

std::string render_bot_prompt(const PromptTemplate& tmpl, const ContextFrame& frame)
{
    return render(tmpl.for_stage(to_string(frame.stage)), frame.related);
}

namespace {

const json* field(const json& obj, std::string_view key)
{
    if (!obj.is_object()) return nullptr;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (text::ascii_lower(it.key()) == text::ascii_lower(key)) {
            if (it.value().is_null()) return nullptr;
            return &it.value();
        }
    return nullptr;
}

std::optional<std::string> string_field(const json& obj, std::string_view key)
{
    const auto* v = field(obj, key);
    if (!v) return std::nullopt;
    if (v->is_string()) return v->get<std::string>();
    if (v->is_array()) {
        // Some replies send the context block as a list of lines.
        std::string joined;
        for (const auto& line : *v)
            if (line.is_string()) joined += (joined.empty() ? "" : "\n") + line.get<std::string>();
        return joined;
    }
    return v->dump();
}

std::vector<std::string> string_list(const json* v)
{
    std::vector<std::string> out;
    if (!v) return out;
    if (v->is_string()) out.push_back(v->get<std::string>());
    if (v->is_array())
        for (const auto& item : *v)
            if (item.is_string()) out.push_back(item.get<std::string>());
    return out;
}

// Names or ids to world ids, keeping order and dropping repeats.
std::vector<std::string> resolve_tours(const std::vector<std::string>& entries, const MuseumWorld& world)
{
    std::vector<std::string> ids;
    for (const auto& entry : entries) {
        const auto* art = world.find_artwork(entry);
        if (!art) {
            spdlog::info("dropping unresolvable tour entry '{}'", entry);
            continue;
        }
        if (std::find(ids.begin(), ids.end(), art->id) == ids.end()) ids.push_back(art->id);
    }
    return ids;
}

int clamp_importance(const json& v)
{
    double value = 1.0;
    if (v.is_number()) value = v.get<double>();
    else if (v.is_string()) {
        try {
            value = std::stod(v.get<std::string>());
        } catch (const std::exception&) {
            value = 1.0;
        }
    }
    return std::clamp(static_cast<int>(std::lround(value)), 1, 3);
}

std::vector<RegionMention> resolve_regions(const json& list, const Artwork* landmark)
{
    std::vector<RegionMention> out;
    if (!list.is_array()) return out;
    for (const auto& item : list) {
        std::string name;
        json importance = 1;
        if (item.is_string()) {
            name = item.get<std::string>();
        } else if (item.is_array() && !item.empty() && item[0].is_string()) {
            name = item[0].get<std::string>();
            if (item.size() > 1) importance = item[1];
        } else if (item.is_object()) {
            auto n = string_field(item, "name");
            if (!n) n = string_field(item, "region");
            if (!n) continue;
            name = *n;
            if (const auto* imp = field(item, "importance")) importance = *imp;
        } else {
            continue;
        }
        const Region* region = landmark ? landmark->find_region(name) : nullptr;
        if (!region) {
            spdlog::info("dropping region '{}' not on the current landmark", name);
            continue;
        }
        const bool seen = std::any_of(out.begin(), out.end(), [&](const auto& r) { return r.name == region->name; });
        if (!seen) out.push_back({region->name, clamp_importance(importance)});
    }
    return out;
}

std::string ask(ChatBackend& backend, std::string_view bot, const PromptTemplate& tmpl, const ContextFrame& frame,
                const Session& session)
{
    ChatExchange ex;
    ex.bot = std::string(bot);
    ex.system = render_bot_prompt(tmpl, frame);
    ex.turns.emplace_back("user", question_frame(frame.utterance, session));
    ex.temperature = kBotTemperature;
    ex.want_json = true;
    return backend.complete(ex);
}

BotResponse degraded(std::string raw)
{
    BotResponse r;
    r.response = std::move(raw);
    r.degraded = true;
    return r;
}

}  // namespace

BotResponse parse_bot_response(const json& doc, const Session& session, const MuseumWorld& world)
{
    BotResponse r;
    if (auto s = string_field(doc, "response")) r.response = *s;
    else if (auto intro = string_field(doc, "introduction")) r.response = *intro;

    r.context = string_field(doc, "context");
    if (auto lm = string_field(doc, "landmark"); lm && !text::is_blank(*lm) && text::normalize(*lm) != "none")
        r.landmark = *lm;
    r.tasks = string_list(field(doc, "tasks"));
    if (!r.tasks.empty()) spdlog::debug("bot echoed tasks {}", text::format_list(r.tasks));

    // TourID is authoritative when present; names are the fallback.
    const auto* tour_ids = field(doc, "tourid");
    const auto* tours = field(doc, "tours");
    if (!tours) tours = field(doc, "tour");
    if (tour_ids || tours) {
        auto ids = resolve_tours(string_list(tour_ids), world);
        if (ids.empty()) ids = resolve_tours(string_list(tours), world);
        r.tours = std::move(ids);
    }

    if (const auto* regions = field(doc, "regions")) {
        const Artwork* landmark = session.landmark ? world.find_artwork(*session.landmark) : nullptr;
        auto resolved = resolve_regions(*regions, landmark);
        if (!resolved.empty()) r.regions = std::move(resolved);
    }
    return r;
}

BotResponse run_explorer(const ContextFrame& frame, const Session& session, const MuseumWorld& world,
                         ChatBackend& backend, const PromptTemplate& tmpl)
{
    if (!frame.tasks.count(TaskKind::InformationEnhancement))
        throw PreconditionError("run_explorer: frame has no information-enhancement task");
    const auto raw = ask(backend, "explorer", tmpl, frame, session);
    try {
        return parse_bot_response(extract_json(raw), session, world);
    } catch (const RepairFailed&) {
        spdlog::warn("explorer reply could not be repaired");
        return degraded(raw);
    }
}

BotResponse run_navigator(const ContextFrame& frame, const Session& session, const MuseumWorld& world,
                          ChatBackend& backend, const PromptTemplate& tmpl)
{
    if (!frame.tasks.count(TaskKind::Navigation))
        throw PreconditionError("run_navigator: frame has no navigation task");
    const auto raw = ask(backend, "navigator", tmpl, frame, session);
    BotResponse r;
    try {
        r = parse_bot_response(extract_json(raw), session, world);
    } catch (const RepairFailed&) {
        spdlog::warn("navigator reply could not be repaired");
        return degraded(raw);
    }
    if (!r.tours || r.tours->empty()) {
        std::vector<std::string> named;
        for (const auto* a : world.mentioned_in(frame.utterance)) named.push_back(a->id);
        if (named.empty()) throw NoResolvableTarget(frame.utterance);
        r.tours = std::move(named);
    }
    if (text::is_blank(r.response)) r.response = "Sure! Follow me.";
    return r;
}

BotResponse run_identifier(const ContextFrame& frame, Session& session, ChatBackend& backend,
                           const PromptTemplate& tmpl)
{
    add_preference(session, frame.utterance);

    // The preference just stored belongs in this prompt too.
    ContextFrame current = frame;
    std::string prefs;
    for (const auto& p : session.preferences) prefs += (prefs.empty() ? "- " : "\n- ") + p;
    current.related["preferences"] = prefs;

    BotResponse r;
    std::string raw;
    try {
        raw = ask(backend, "identifier", tmpl, current, session);
    } catch (const GatewayFailure& e) {
        spdlog::warn("identifier gateway failure: {}", e.what());
        r.response = std::string(kPreferenceAck);
        return r;
    }
    if (auto doc = try_extract_json(raw)) {
        if (auto s = string_field(*doc, "response")) r.response = *s;
    }
    if (text::is_blank(r.response)) {
        const auto prose = text::trim(raw);
        r.response = prose.empty() || prose.find_first_of("{[") != std::string::npos ? std::string(kPreferenceAck)
                                                                                      : prose;
    }
    return r;
}

}  // namespace wander

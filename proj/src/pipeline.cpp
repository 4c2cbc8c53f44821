#include "wander/pipeline.hpp"

#include "wander/errors.hpp"
#include "wander/json_repair.hpp"
#include "wander/text.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>

namespace wander {

using nlohmann::json;

std::string_view to_string(TaskKind task)
{
    switch (task) {
    case TaskKind::InformationEnhancement: return "information enhancement";
    case TaskKind::PersonalizedPreference: return "personalized preference";
    case TaskKind::Navigation: return "navigation";
    }
    return "information enhancement";
}

std::string_view to_string(InfoKind info)
{
    switch (info) {
    case InfoKind::Spatial: return "spatial";
    case InfoKind::Semantic: return "semantic";
    case InfoKind::Social: return "social";
    }
    return "semantic";
}

std::optional<TaskKind> parse_task_label(std::string_view label)
{
    const auto l = text::normalize(label);
    if (l == "information enhancement" || l == "information") return TaskKind::InformationEnhancement;
    if (l == "personalized preference" || l == "personalised preference" || l == "preference")
        return TaskKind::PersonalizedPreference;
    if (l == "navigation") return TaskKind::Navigation;
    return std::nullopt;
}

std::optional<InfoKind> parse_info_label(std::string_view label)
{
    const auto l = text::normalize(label);
    if (l == "spatial" || l == "spatial information") return InfoKind::Spatial;
    if (l == "semantic" || l == "semantic information") return InfoKind::Semantic;
    if (l == "social" || l == "social information") return InfoKind::Social;
    return std::nullopt;
}

std::string question_frame(std::string_view utterance, const Session& session)
{
    return fmt::format("Question: {}\nPosition: {}\nLandmark: {}\nHistory: {}", utterance,
                       text::format_point(session.visitor_pos.x, session.visitor_pos.y),
                       session.landmark ? "\"" + *session.landmark + "\"" : std::string("null"),
                       session.history.empty() ? std::string("null") : text::format_list(session.history));
}

namespace {

const json* find_key(const json& obj, std::string_view key)
{
    if (!obj.is_object()) return nullptr;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (text::ascii_lower(it.key()) == text::ascii_lower(key)) return &it.value();
    return nullptr;
}

std::vector<std::string> strings_of(const json& list)
{
    std::vector<std::string> out;
    if (list.is_string()) out.push_back(list.get<std::string>());
    if (!list.is_array()) return out;
    for (const auto& v : list)
        if (v.is_string()) out.push_back(v.get<std::string>());
    return out;
}

std::string chat(const PipelineContext& ctx, const PromptTemplate& tmpl, std::string_view bot, std::string user,
                 const SlotMap& slots)
{
    ChatExchange ex;
    ex.bot = std::string(bot);
    ex.system = render(tmpl, slots);
    ex.turns.emplace_back("user", std::move(user));
    ex.temperature = kClassifierTemperature;
    ex.want_json = true;
    return ctx.backend.complete(ex);
}

void push_unique(std::vector<std::string>& v, const std::string& id)
{
    if (std::find(v.begin(), v.end(), id) == v.end()) v.push_back(id);
}

}  // namespace

std::vector<std::string> parse_labels(std::string_view raw, std::string_view key)
{
    if (auto obj = try_extract_json(raw); obj && obj->is_object()) {
        if (const auto* list = find_key(*obj, key)) return strings_of(*list);
        return {};
    }
    try {
        return strings_of(extract_json_array(raw));
    } catch (const RepairFailed&) {
        return {};
    }
}

Classification classify(std::string_view utterance, const Session& session, const PipelineContext& ctx)
{
    if (text::is_blank(utterance)) throw PreconditionError("classify: empty utterance");

    const auto raw = chat(ctx, ctx.prompts.classifier, "classifier", question_frame(utterance, session), {});

    Classification out;
    std::string_view key = "tasks";
    if (auto obj = try_extract_json(raw); obj && obj->is_object()) {
        if (const auto* flag = find_key(*obj, "summary"); flag && flag->is_boolean())
            out.summary_intent = flag->get<bool>();
    }
    for (const auto& label : parse_labels(raw, key)) {
        if (text::normalize(label) == "summary") {
            out.summary_intent = true;
        } else if (auto task = parse_task_label(label)) {
            out.tasks.insert(*task);
        } else {
            spdlog::debug("classifier label '{}' dropped", label);
        }
    }
    if (out.tasks.empty()) out.tasks.insert(TaskKind::InformationEnhancement);
    return out;
}

Compilation compile(std::string_view utterance, const TaskSet& tasks, const Session& session,
                    const PipelineContext& ctx)
{
    if (tasks.empty()) throw PreconditionError("compile: empty task set");

    std::vector<std::string> labels;
    for (auto t : tasks) labels.emplace_back(to_string(t));
    const auto user = question_frame(utterance, session) + "\nTasks: " + text::format_list(labels);
    const auto raw = chat(ctx, ctx.prompts.compiler, "compiler", user, {});

    Compilation out;
    for (const auto& label : parse_labels(raw, "information")) {
        if (auto info = parse_info_label(label)) out.info.insert(*info);
    }
    if (auto obj = try_extract_json(raw); obj && obj->is_object()) {
        if (const auto* names = find_key(*obj, "artworks")) {
            for (const auto& name : strings_of(*names)) {
                if (const auto* art = ctx.world.find_artwork(name)) push_unique(out.referenced, art->id);
                else spdlog::info("compiler referenced unknown artwork '{}'", name);
            }
        }
    }
    return out;
}

SlotMap materialize_slots(const InfoSet& info, const std::vector<std::string>& named, StageKind stage,
                          const Session& session, const MuseumWorld& world, const VisitStats* stats,
                          std::vector<std::string>* candidates_out)
{
    SlotMap slots;
    slots["visitor_position"] = text::format_point(session.visitor_pos.x, session.visitor_pos.y);
    slots["stage"] = std::string(to_string(stage));
    slots["history"] = session.history.empty() ? "null" : text::format_list(session.history);
    if (session.preferences.empty()) {
        slots["preferences"] = "none";
    } else {
        std::string prefs;
        for (const auto& p : session.preferences) prefs += (prefs.empty() ? "- " : "\n- ") + p;
        slots["preferences"] = prefs;
    }

    const Artwork* landmark = session.landmark ? world.find_artwork(*session.landmark) : nullptr;
    slots["landmark"] = landmark ? fmt::format("\"{}\" ({})", landmark->id, landmark->name) : "null";

    const Artwork* target = named.empty() ? nullptr : world.find_artwork(named.front());
    slots["target_position"] =
        target ? text::format_point(target->position.x, target->position.y, target->position.z) : "none specified";

    // Candidate artworks: named, then popular (social), then nearby (spatial
    // without a name).
    std::vector<std::string> candidates;
    for (const auto& id : named) push_unique(candidates, id);
    if (info.count(InfoKind::Social)) {
        for (const auto* a : world.artworks_by_filter({std::nullopt, std::nullopt, SortKey::Popularity, {}, kCandidateLimit}))
            push_unique(candidates, a->id);
    }
    if (info.count(InfoKind::Spatial) && named.empty()) {
        for (const auto* a : world.artworks_by_filter(
                 {std::nullopt, std::nullopt, SortKey::Distance, session.visitor_pos, kCandidateLimit}))
            push_unique(candidates, a->id);
    }

    auto record = [&](const std::string& id) { return world.find_artwork(id); };

    std::string related;
    auto add_block = [&](const std::string& slot, const std::string& title, const std::string& body) {
        slots[slot] = body;
        related += (related.empty() ? "" : "\n\n") + title + ":\n" + body;
    };

    if (info.count(InfoKind::Spatial)) {
        std::string body;
        for (const auto& id : candidates) {
            const auto* a = record(id);
            body += fmt::format("{}- {} \"{}\": position {}, {:.1f} m away", body.empty() ? "" : "\n", a->id, a->name,
                                text::format_point(a->position.x, a->position.y, a->position.z),
                                distance(a->position.floor(), session.visitor_pos));
        }
        add_block("artwork_positions", "Artwork positions", body.empty() ? "none" : body);
    }
    if (info.count(InfoKind::Semantic)) {
        std::vector<std::string> ids = candidates;
        if (landmark) push_unique(ids, landmark->id);
        std::string body;
        for (const auto& id : ids) {
            const auto* a = record(id);
            body += fmt::format("{}- {} \"{}\" by {} ({}, {}): {}", body.empty() ? "" : "\n", a->id, a->name, a->author,
                                a->year, a->style, a->description);
            for (const auto& r : a->regions) body += fmt::format("\n    region \"{}\": {}", r.name, r.note);
        }
        add_block("artwork_details", "Artwork details", body.empty() ? "none" : body);
        if (named.empty()) {
            std::string catalog;
            for (const auto& a : world.artworks())
                catalog += fmt::format("{}- {} \"{}\" by {} ({}, {})", catalog.empty() ? "" : "\n", a.id, a.name,
                                       a.author, a.year, a.style);
            add_block("catalog", "Museum catalog", catalog);
        }
    }
    if (info.count(InfoKind::Social)) {
        std::string body;
        for (const auto& id : candidates) {
            const auto* a = record(id);
            const auto idx = world.index_of(id);
            const auto visits = stats ? stats->count(*idx) : a->visit_count;
            body += fmt::format("{}- {} \"{}\": popularity {:g}, visits {}", body.empty() ? "" : "\n", a->id, a->name,
                                a->popularity, visits);
        }
        add_block("popularity", "Popularity", body.empty() ? "none" : body);
    }
    slots["related_info"] = related.empty() ? "none" : related;

    if (candidates_out) *candidates_out = std::move(candidates);
    return slots;
}

ContextFrame identify_context(std::string_view utterance, const Session& session, const PipelineContext& ctx)
{
    ContextFrame frame;
    frame.utterance = std::string(utterance);

    const auto cls = classify(utterance, session, ctx);
    frame.tasks = cls.tasks;
    frame.summary_intent = cls.summary_intent;
    frame.stage = infer_stage(session, cls.summary_intent);

    const auto comp = compile(utterance, frame.tasks, session, ctx);
    frame.info = comp.info;

    for (const auto* a : ctx.world.mentioned_in(utterance)) push_unique(frame.named, a->id);
    for (const auto& id : comp.referenced) push_unique(frame.named, id);

    frame.related = materialize_slots(frame.info, frame.named, frame.stage, session, ctx.world, ctx.stats,
                                      &frame.candidates);
    return frame;
}

}  // namespace wander

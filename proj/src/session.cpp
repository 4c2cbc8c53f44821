#include "wander/session.hpp"

#include "wander/errors.hpp"
#include "wander/text.hpp"

#include <algorithm>
#include <istream>

namespace wander {

using nlohmann::json;

std::string_view to_string(StageKind stage)
{
    switch (stage) {
    case StageKind::Beginning: return "beginning";
    case StageKind::InProgress: return "in progress";
    case StageKind::Ending: return "ending";
    }
    return "in progress";
}

Session make_session(std::string id, const MuseumWorld& world)
{
    Session s;
    s.id = std::move(id);
    s.visitor_pos = world.spawn();
    s.guide_pos = world.spawn();
    return s;
}

StageKind infer_stage(const Session& session, bool summary_intent)
{
    if (session.history.empty()) return StageKind::Beginning;
    if (summary_intent) return StageKind::Ending;
    if (session.planned_tour) {
        const auto& h = session.history;
        bool complete = std::all_of(session.planned_tour->begin(), session.planned_tour->end(),
                                    [&](const std::string& id) { return std::find(h.begin(), h.end(), id) != h.end(); });
        if (complete) return StageKind::Ending;
    }
    return StageKind::InProgress;
}

void record_arrival(Session& session, const MuseumWorld& world, std::string_view artwork_id, VisitStats* stats)
{
    auto idx = world.index_of(artwork_id);
    if (!idx) throw UnknownArtwork(std::string(artwork_id));
    session.landmark = std::string(artwork_id);
    if (session.history.empty() || session.history.back() != artwork_id)
        session.history.emplace_back(artwork_id);
    stop_walking(session);
    if (stats) stats->record_visit(*idx);
}

void add_preference(Session& session, std::string statement)
{
    if (text::is_blank(statement)) throw EmptyStatement();
    session.preferences.push_back(std::move(statement));
}

void start_walking(Session& session, std::vector<Vec2> waypoints)
{
    if (waypoints.empty()) throw PreconditionError("start_walking: empty path");
    session.path = std::move(waypoints);
    session.walking = true;
}

void stop_walking(Session& session)
{
    session.path.clear();
    session.walking = false;
}

// ---------------------------------------------------------------------------

namespace {

json point(Vec2 p) { return json::array({p.x, p.y}); }

std::optional<Vec2> opt_point(const json& line, const char* key)
{
    auto it = line.find(key);
    if (it == line.end() || it->is_null()) return std::nullopt;
    if (!it->is_array() || it->size() != 2) throw ParseError(std::string("event: bad '") + key + "'");
    return Vec2{(*it)[0].get<double>(), (*it)[1].get<double>()};
}

struct EventWriter {
    json& out;
    void operator()(const UtteranceEvent& e) const
    {
        out["ev"] = "utterance";
        out["text"] = e.text;
    }
    void operator()(const ArrivalEvent& e) const
    {
        out["ev"] = "arrival";
        out["artwork"] = e.artwork;
        if (e.visitor) out["visitor"] = point(*e.visitor);
        if (e.guide) out["guide"] = point(*e.guide);
    }
    void operator()(const PreferenceEvent& e) const
    {
        out["ev"] = "preference";
        out["text"] = e.text;
    }
    void operator()(const FeedbackEvent& e) const
    {
        out["ev"] = "feedback";
        out["combo"] = e.combo;
        out["voice"] = e.voice;
        if (e.planned_tour) out["planned_tour"] = *e.planned_tour;
    }
};

}  // namespace

json to_json(const SessionEvent& event)
{
    json out = {{"t", event.t}};
    std::visit(EventWriter{out}, event.body);
    return out;
}

SessionEvent event_from_json(const json& line)
{
    if (!line.is_object()) throw ParseError("event: expected object");
    SessionEvent ev;
    try {
        ev.t = line.value("t", 0.0);
        const auto kind = line.at("ev").get<std::string>();
        if (kind == "utterance") {
            ev.body = UtteranceEvent{line.at("text").get<std::string>()};
        } else if (kind == "arrival") {
            ev.body = ArrivalEvent{line.at("artwork").get<std::string>(), opt_point(line, "visitor"),
                                   opt_point(line, "guide")};
        } else if (kind == "preference") {
            ev.body = PreferenceEvent{line.at("text").get<std::string>()};
        } else if (kind == "feedback") {
            FeedbackEvent fb{line.at("combo").get<std::string>(), line.value("voice", ""), std::nullopt};
            if (line.contains("planned_tour")) fb.planned_tour = line["planned_tour"].get<std::vector<std::string>>();
            ev.body = std::move(fb);
        } else {
            throw ParseError("event: unknown kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("event: ") + e.what());
    }
    return ev;
}

void apply_event(Session& session, const SessionEvent& event, const MuseumWorld& world, VisitStats* stats)
{
    session.clock = std::max(session.clock, event.t);
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, UtteranceEvent>) {
                // Speaking again ends any walk in progress.
                stop_walking(session);
                session.conversation.push_back({"visitor", e.text});
            } else if constexpr (std::is_same_v<T, ArrivalEvent>) {
                record_arrival(session, world, e.artwork, stats);
                if (e.visitor) session.visitor_pos = *e.visitor;
                if (e.guide) session.guide_pos = *e.guide;
            } else if constexpr (std::is_same_v<T, PreferenceEvent>) {
                add_preference(session, e.text);
            } else {
                session.conversation.push_back({"guide", e.voice});
                if (e.planned_tour) session.planned_tour = e.planned_tour;
            }
        },
        event.body);
}

Session replay_events(std::istream& in, std::string id, const MuseumWorld& world)
{
    Session session = make_session(std::move(id), world);
    std::string line;
    while (std::getline(in, line)) {
        if (text::is_blank(line)) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("event log: ") + e.what());
        }
        apply_event(session, event_from_json(doc), world);
    }
    return session;
}

}  // namespace wander

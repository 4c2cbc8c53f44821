#include "wander/transcript.hpp"

#include "wander/errors.hpp"
#include "wander/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>

namespace wander {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::optional<std::vector<std::string>> optional_list(const json& obj, const char* key)
{
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    return obj[key].get<std::vector<std::string>>();
}

std::string show(const std::optional<std::vector<std::string>>& v)
{
    return v ? text::format_list(*v) : "none";
}

}  // namespace

Transcript load_transcript(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open transcript " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("transcript " + path.string() + ": " + e.what());
    }

    const auto base = path.parent_path();
    Transcript t;
    try {
        t.museum = base / doc.at("museum").get<std::string>();
        t.rules = base / doc.at("rules").get<std::string>();
        t.prompts = base / doc.at("prompts").get<std::string>();
        for (const auto& item : doc.value("turns", json::array())) {
            TranscriptTurn turn;
            turn.utterance = item.at("utterance").get<std::string>();
            if (item.contains("setup")) turn.setup = item["setup"];
            const auto exp = item.value("expect", json::object());
            if (exp.contains("combo")) turn.expect.combo = exp["combo"].get<std::string>();
            turn.expect.tours = optional_list(exp, "tours");
            turn.expect.tasks = optional_list(exp, "tasks");
            if (exp.contains("landmark") && !exp["landmark"].is_null())
                turn.expect.landmark = exp["landmark"].get<std::string>();
            if (exp.contains("virtual_screen_includes"))
                turn.expect.virtual_screen_includes = exp["virtual_screen_includes"].get<std::vector<std::string>>();
            t.turns.push_back(std::move(turn));
        }
    } catch (const json::exception& e) {
        throw ParseError("transcript " + path.string() + ": " + e.what());
    }
    return t;
}

Session session_from_setup(const json& setup, std::string id, const MuseumWorld& world)
{
    Session s = make_session(std::move(id), world);
    if (!setup.is_object()) return s;

    if (setup.contains("position")) {
        const auto& pos = setup["position"];
        if (pos.is_array() && pos.size() == 2) {
            s.visitor_pos = {pos[0].get<double>(), pos[1].get<double>()};
        } else if (pos.is_object() && pos.contains("at")) {
            const auto* art = world.find_artwork(pos["at"].get<std::string>());
            if (!art) throw UnknownArtwork(pos["at"].get<std::string>());
            s.visitor_pos = world.viewing_point(*art);
            s.landmark = art->id;
        } else {
            throw ParseError("setup.position must be [x, y] or {\"at\": id}");
        }
        s.guide_pos = s.visitor_pos;
    }
    if (setup.contains("landmark")) {
        if (setup["landmark"].is_null()) {
            s.landmark.reset();
        } else {
            const auto* art = world.find_artwork(setup["landmark"].get<std::string>());
            if (!art) throw UnknownArtwork(setup["landmark"].get<std::string>());
            s.landmark = art->id;
        }
    }
    if (setup.contains("history") && !setup["history"].is_null())
        s.history = setup["history"].get<std::vector<std::string>>();
    if (setup.contains("preferences")) s.preferences = setup["preferences"].get<std::vector<std::string>>();
    if (setup.contains("planned_tour") && !setup["planned_tour"].is_null())
        s.planned_tour = setup["planned_tour"].get<std::vector<std::string>>();
    return s;
}

std::size_t ReplayReport::passed() const
{
    return static_cast<std::size_t>(std::count_if(turns.begin(), turns.end(), [](const auto& t) { return t.passed; }));
}

TurnReport check_turn(const TranscriptTurn& turn, const TurnOutcome& outcome)
{
    TurnReport r;
    r.utterance = turn.utterance;
    const auto& e = turn.expect;
    const auto& resp = outcome.response;

    if (e.combo && *e.combo != to_string(outcome.bundle.combo))
        r.diffs.push_back(fmt::format("combo: expected {}, got {}", *e.combo, to_string(outcome.bundle.combo)));
    if (e.tours) {
        std::optional<std::vector<std::string>> got;
        if (resp) got = resp->tours;
        if (got != e.tours) r.diffs.push_back(fmt::format("tours: expected {}, got {}", show(e.tours), show(got)));
    }
    if (e.landmark) {
        std::string got = resp && resp->landmark ? *resp->landmark : "none";
        if (text::normalize(got) != text::normalize(*e.landmark))
            r.diffs.push_back(fmt::format("landmark: expected {}, got {}", *e.landmark, got));
    }
    if (e.tasks) {
        std::vector<std::string> got;
        if (outcome.frame)
            for (auto t : outcome.frame->tasks) got.emplace_back(to_string(t));
        auto want = *e.tasks;
        std::sort(want.begin(), want.end());
        std::sort(got.begin(), got.end());
        if (got != want)
            r.diffs.push_back(fmt::format("tasks: expected {}, got {}", text::format_list(want), text::format_list(got)));
    }
    for (const auto& id : e.virtual_screen_includes) {
        const auto& vs = outcome.bundle.virtual_screen;
        if (!vs || std::find(vs->begin(), vs->end(), id) == vs->end())
            r.diffs.push_back(fmt::format("virtual_screen: expected to include {}, got {}", id, show(vs)));
    }
    r.passed = r.diffs.empty();
    return r;
}

ReplayReport replay_transcript(const Transcript& transcript, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    ReplayReport report;
    if (transcript.turns.empty()) {
        out << "warning: transcript has no turns\n0/0 turns passed\n";
        return report;
    }

    const auto world = load_museum(transcript.museum);
    VisitStats stats(world);
    auto backend = ScriptedBackend::from_file(transcript.rules);
    const auto prompts = load_prompt_set(transcript.prompts);
    Engine engine(world, &stats, backend, prompts);

    Session session = make_session("replay", world);
    for (std::size_t i = 0; i < transcript.turns.size(); ++i) {
        const auto& turn = transcript.turns[i];
        if (turn.setup) session = session_from_setup(*turn.setup, "replay", world);

        apply_event(session, {session.clock, UtteranceEvent{turn.utterance}}, world);
        const auto outcome = engine.run_turn(session, turn.utterance);
        for (const auto& ev : outcome.events) apply_event(session, ev, world);
        // Later turns see the visitor already standing at the last stop.
        if (outcome.path && !outcome.stops.empty()) {
            const auto* last = world.find_artwork(outcome.stops.back());
            session.visitor_pos = session.guide_pos = world.viewing_point(*last);
            record_arrival(session, world, last->id);
        }

        auto r = check_turn(turn, outcome);
        out << fmt::format("turn {}: {}  {}\n", i + 1, r.passed ? "PASS" : "FAIL", turn.utterance);
        for (const auto& d : r.diffs) out << "    " << d << '\n';
        report.turns.push_back(std::move(r));
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << fmt::format("{}/{} turns passed ({:.2f} s)\n", report.passed(), report.turns.size(), report.seconds);
    return report;
}

}  // namespace wander

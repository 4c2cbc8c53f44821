#include "support/fixtures.hpp"
#include "wander/errors.hpp"
#include "wander/session.hpp"

#include <doctest.h>

#include <sstream>

using namespace wander;

TEST_CASE("a fresh session starts at spawn in the beginning stage")
{
    const auto& w = testing::museum35();
    auto s = make_session("a", w);
    CHECK(s.visitor_pos == w.spawn());
    CHECK(s.guide_pos == w.spawn());
    CHECK_FALSE(s.walking);
    CHECK(infer_stage(s, false) == StageKind::Beginning);
    CHECK(infer_stage(s, true) == StageKind::Beginning);
}

TEST_CASE("stage inference")
{
    auto s = make_session("a", testing::museum35());
    s.history = {"painting 005", "painting 003", "painting 000"};
    CHECK(infer_stage(s, false) == StageKind::InProgress);
    CHECK(infer_stage(s, true) == StageKind::Ending);

    s.planned_tour = std::vector<std::string>{"painting 005", "painting 001"};
    CHECK(infer_stage(s, false) == StageKind::InProgress);
    s.history.push_back("painting 001");
    CHECK(infer_stage(s, false) == StageKind::Ending);

    CHECK(to_string(StageKind::InProgress) == "in progress");
}

TEST_CASE("record_arrival appends history without consecutive repeats")
{
    const auto& w = testing::museum35();
    VisitStats stats(w);
    auto s = make_session("a", w);
    start_walking(s, {{0, 0}, {1, 1}});
    record_arrival(s, w, "painting 007", &stats);
    CHECK(s.landmark == std::optional<std::string>("painting 007"));
    CHECK_FALSE(s.walking);
    CHECK(s.path.empty());
    record_arrival(s, w, "painting 007", &stats);
    record_arrival(s, w, "painting 000", &stats);
    record_arrival(s, w, "painting 007", &stats);
    CHECK(s.history == std::vector<std::string>{"painting 007", "painting 000", "painting 007"});
    CHECK(stats.count(*w.index_of("painting 007")) == w.find_artwork("painting 007")->visit_count + 3);
    CHECK_THROWS_AS(record_arrival(s, w, "painting 999"), UnknownArtwork);
}

TEST_CASE("preferences reject blank statements")
{
    auto s = make_session("a", testing::museum35());
    add_preference(s, "I really like Chinese paintings");
    CHECK(s.preferences.size() == 1);
    CHECK_THROWS_AS(add_preference(s, "   "), EmptyStatement);
    CHECK_THROWS_AS(start_walking(s, {}), PreconditionError);
}

TEST_CASE("event log round-trips and replays to the same state")
{
    const auto& w = testing::museum35();
    std::vector<SessionEvent> events{
        {0.0, UtteranceEvent{"Take me to visit the painting named The Birth of Venus."}},
        {0.0, FeedbackEvent{"C5", "Certainly!", std::nullopt}},
        {21.3, ArrivalEvent{"painting 007", Vec2{-19.5, 17.25}, Vec2{-19.6, 17.4}}},
        {22.0, PreferenceEvent{"show me Picasso paintings first"}},
        {23.0, FeedbackEvent{"C4", "Here are two.", std::vector<std::string>{"painting 000", "painting 001"}}},
    };

    auto live = make_session("log", w);
    std::ostringstream log;
    for (const auto& e : events) {
        apply_event(live, e, w);
        log << to_json(e).dump() << '\n';
    }
    std::istringstream in(log.str());
    const auto replayed = replay_events(in, "log", w);
    CHECK(replayed == live);
    CHECK(replayed.history == std::vector<std::string>{"painting 007"});
    CHECK(replayed.visitor_pos == Vec2{-19.5, 17.25});
    CHECK(replayed.planned_tour == std::optional<std::vector<std::string>>({"painting 000", "painting 001"}));
    CHECK(replayed.conversation.size() == 3);
    CHECK(replayed.clock == doctest::Approx(23.0));
}

TEST_CASE("an utterance interrupts walking")
{
    const auto& w = testing::museum35();
    auto s = make_session("a", w);
    start_walking(s, {{0, 0}, {1, 0}});
    apply_event(s, {1.0, UtteranceEvent{"wait"}}, w);
    CHECK_FALSE(s.walking);
    CHECK(s.conversation.back().speaker == "visitor");
}

TEST_CASE("malformed event lines are parse errors")
{
    CHECK_THROWS_AS(event_from_json(nlohmann::json::parse(R"({"t":1,"ev":"teleport"})")), ParseError);
    CHECK_THROWS_AS(event_from_json(nlohmann::json::parse(R"({"t":1,"ev":"arrival"})")), ParseError);
    std::istringstream bad("{not json}\n");
    CHECK_THROWS_AS(replay_events(bad, "x", testing::museum35()), ParseError);
}

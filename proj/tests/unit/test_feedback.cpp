#include "support/fixtures.hpp"
#include "wander/errors.hpp"
#include "wander/feedback.hpp"

#include <doctest.h>

#include <fmt/format.h>

#include <cmath>
#include <random>

using namespace wander;

namespace {

Session viewing(const std::string& id)
{
    const auto& w = testing::museum35();
    auto s = make_session("f", w);
    s.visitor_pos = s.guide_pos = w.viewing_point(*w.find_artwork(id));
    s.landmark = id;
    s.history = {id};
    return s;
}

ContextFrame frame(std::string utterance)
{
    ContextFrame f;
    f.utterance = std::move(utterance);
    f.tasks = {TaskKind::InformationEnhancement};
    return f;
}

BotResponse reply(std::string text)
{
    BotResponse r;
    r.response = std::move(text);
    return r;
}

}  // namespace

TEST_CASE("combo decision table")
{
    // bot x {regions?} x {foreign tour?} with the expected combo written out.
    struct Row {
        BotId bot;
        bool regions;
        bool foreign;
        ComboId want;
    };
    const Row rows[] = {
        {BotId::Navigator, false, false, ComboId::C5},  {BotId::Navigator, true, false, ComboId::C5},
        {BotId::Navigator, false, true, ComboId::C5},   {BotId::Navigator, true, true, ComboId::C5},
        {BotId::Identifier, false, false, ComboId::C1}, {BotId::Identifier, true, false, ComboId::C1},
        {BotId::Identifier, false, true, ComboId::C1},  {BotId::Identifier, true, true, ComboId::C1},
        {BotId::Explorer, false, false, ComboId::C2},   {BotId::Explorer, true, false, ComboId::C3},
        {BotId::Explorer, false, true, ComboId::C4},    {BotId::Explorer, true, true, ComboId::C3},
    };
    const std::optional<std::string> landmark = "painting 000";
    for (const auto& row : rows) {
        auto r = reply("x");
        if (row.regions) r.regions = std::vector<RegionMention>{{"Enigmatic Smile", 2}};
        if (row.foreign) r.tours = std::vector<std::string>{"painting 000", "painting 001"};
        CHECK(select_combo(row.bot, r, landmark) == row.want);
    }
}

TEST_CASE("tours that only name the landmark stay C2")
{
    auto r = reply("x");
    r.tours = std::vector<std::string>{"painting 000"};
    CHECK(select_combo(BotId::Explorer, r, std::string("painting 000")) == ComboId::C2);
    CHECK(select_combo(BotId::Explorer, r, std::nullopt) == ComboId::C4);
    r.tours = std::vector<std::string>{};
    CHECK(select_combo(BotId::Explorer, r, std::nullopt) == ComboId::C2);
    r.regions = std::vector<RegionMention>{};
    CHECK(select_combo(BotId::Explorer, r, std::nullopt) == ComboId::C2);
}

TEST_CASE("combo names round-trip")
{
    for (auto c : {ComboId::C1, ComboId::C2, ComboId::C3, ComboId::C4, ComboId::C5})
        CHECK(parse_combo(to_string(c)) == c);
    CHECK(parse_combo("c3") == ComboId::C3);
    CHECK_FALSE(parse_combo("C6").has_value());
    CHECK(tier_color(3) == "dark_red");
    CHECK(tier_color(2) == "red");
    CHECK(tier_color(1) == "orange");
}

TEST_CASE("channel presence holds for fuzzed explorer responses")
{
    const auto& w = testing::museum35();
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> pick(0, 34);
    std::bernoulli_distribution coin(0.5);
    const char* regions[] = {"Enigmatic Smile", "Landscape Background", "Folded Hands"};
    for (int i = 0; i < 300; ++i) {
        auto s = coin(rng) ? viewing("painting 000") : make_session("f", w);
        auto r = reply(coin(rng) ? "Look at the Mona Lisa. It is famous." : "Hello there.");
        if (coin(rng)) r.context = "Key points:\n- one";
        if (coin(rng)) {
            std::vector<std::string> tours;
            const int n = pick(rng) % 5;
            for (int k = 0; k < n; ++k) tours.push_back(fmt::format("painting {:03}", pick(rng)));
            r.tours = tours;
        }
        if (s.landmark && coin(rng)) {
            std::vector<RegionMention> rs;
            for (const char* name : regions)
                if (coin(rng)) rs.push_back({name, 1 + pick(rng) % 3});
            r.regions = rs;
        }
        const auto bot = coin(rng) ? BotId::Explorer : BotId::Identifier;
        auto b = compose(frame("q"), bot, r, s, w);
        CHECK(channels_match(b));
        CHECK(b.combo == select_combo(bot, r, s.landmark));
        CHECK(b.echo == "q");
    }
}

TEST_CASE("channels_match rejects extra or missing channels")
{
    FeedbackBundle b;
    b.combo = ComboId::C1;
    CHECK(channels_match(b));
    b.text_window = TextWindow{"x"};
    CHECK_FALSE(channels_match(b));
    b.combo = ComboId::C2;
    CHECK(channels_match(b));
    b.minimap = MinimapState{};
    CHECK_FALSE(channels_match(b));
    b.combo = ComboId::C5;
    b.text_window.reset();
    CHECK_FALSE(channels_match(b));
    b.signpost = SignpostState{};
    CHECK(channels_match(b));
}

TEST_CASE("highlights reveal in voice mention order")
{
    const auto& w = testing::museum35();
    auto s = viewing("painting 007");
    auto r = reply("Look first at the Goddess Venus standing on her shell. On the left, Zephyr and Aura blow her "
                   "ashore. On the right, The Hora waits.");
    r.context = "Key figures";
    r.regions = std::vector<RegionMention>{{"The Hora", 2}, {"Goddess Venus", 3}, {"Zephyr and Aura", 2}};
    auto b = compose(frame("What are interesting details in this painting"), BotId::Explorer, r, s, w);
    REQUIRE(b.combo == ComboId::C3);
    REQUIRE(b.highlights);
    REQUIRE(b.highlights->size() == 3);
    const auto& hl = *b.highlights;
    CHECK(hl[0].region == "Goddess Venus");
    CHECK(hl[0].tier == 3);
    CHECK(hl[1].region == "Zephyr and Aura");
    CHECK(hl[2].region == "The Hora");
    for (const auto& h : hl) {
        CHECK(h.artwork == "painting 007");
        CHECK(h.reveal_at == doctest::Approx(static_cast<double>(r.response.find(h.region)) / kSpeechRate));
        CHECK(h.rect == w.find_artwork("painting 007")->find_region(h.region)->rect);
    }
    CHECK(b.avatar.pose == Pose::Point);
    CHECK(b.avatar.target == std::optional<std::string>("painting 007"));
    CHECK(b.text_window->text == "Key figures");
    CHECK(to_json(b).at("highlights")[0].at("color") == "dark_red");
}

TEST_CASE("unmentioned regions reveal at the end of the narration")
{
    const auto& w = testing::museum35();
    auto s = viewing("painting 000");
    auto r = reply("The Folded Hands are calm.");
    r.regions = std::vector<RegionMention>{{"Enigmatic Smile", 1}, {"Folded Hands", 1}};
    ComposeOptions opt;
    opt.speech_rate = 10.0;
    auto b = compose(frame("details"), BotId::Explorer, r, s, w, opt);
    REQUIRE(b.highlights);
    CHECK((*b.highlights)[0].region == "Folded Hands");
    CHECK((*b.highlights)[0].reveal_at == doctest::Approx(0.4));
    CHECK((*b.highlights)[1].reveal_at == doctest::Approx(r.response.size() / 10.0));
}

TEST_CASE("virtual screen follows the context text order")
{
    const auto& w = testing::museum35();
    auto s = make_session("f", w);
    auto r = reply("Try The Scream and then the Mona Lisa.");
    r.context = "Plan:\n- Mona Lisa\n- Guernica";
    r.tours = std::vector<std::string>{"painting 003", "painting 006", "painting 000", "painting 010"};
    auto b = compose(frame("plan"), BotId::Explorer, r, s, w);
    REQUIRE(b.combo == ComboId::C4);
    // Context mentions first, then voice-only mentions, then the rest in tour order.
    CHECK(*b.virtual_screen ==
          std::vector<std::string>{"painting 000", "painting 006", "painting 003", "painting 010"});
    CHECK(b.text_window->text == "Plan:\n- Mona Lisa\n- Guernica");
    CHECK(b.text_window->placement == "front-right");
    CHECK(b.text_window->translucent);
}

TEST_CASE("text window falls back to the first two sentences")
{
    const auto& w = testing::museum35();
    auto s = make_session("f", w);
    auto b = compose(frame("hi"), BotId::Explorer, reply("One. Two! Three? Four."), s, w);
    CHECK(b.combo == ComboId::C2);
    CHECK(b.text_window->text == "One. Two!");
    CHECK(b.voice == "One. Two! Three? Four.");
    CHECK(b.avatar.pose == Pose::Speak);
}

TEST_CASE("navigation bundles walk and point the signpost at the goal")
{
    const auto& w = testing::museum35();
    auto s = make_session("f", w);
    auto path = plan_path(w, s.visitor_pos, *w.find_artwork("painting 000"));
    start_walking(s, path.waypoints);
    BotResponse r = reply("Sure! Follow me to the most popular painting, the Mona Lisa. It is a short walk. Enjoy.");
    r.tours = std::vector<std::string>{"painting 000"};
    auto f = frame("Guide me to see the most popular painting");
    f.tasks = {TaskKind::Navigation};
    auto b = compose(f, BotId::Navigator, r, s, w);
    CHECK(b.combo == ComboId::C5);
    CHECK(channels_match(b));
    CHECK(b.voice == "Sure! Follow me to the most popular painting, the Mona Lisa.");
    CHECK(b.avatar.pose == Pose::Walk);
    CHECK(b.avatar.target == std::optional<std::string>("painting 000"));
    CHECK_FALSE(b.avatar.face_visitor);
    CHECK(b.minimap->visible);
    const auto goal = path.waypoints.back();
    CHECK(b.signpost->distance == doctest::Approx(distance(s.visitor_pos, goal)));
    CHECK(b.signpost->bearing == doctest::Approx(std::atan2(goal.x - s.visitor_pos.x, goal.y - s.visitor_pos.y)));

    r.tours = std::vector<std::string>{};
    CHECK_THROWS_AS(compose(f, BotId::Navigator, r, s, w), PreconditionError);
}

TEST_CASE("fallback bundles are voice-only apologies")
{
    auto t = fallback("where?", {Failure::Kind::Timeout, ""});
    CHECK(t.combo == ComboId::C1);
    CHECK(t.voice == kRetryPrompt);
    CHECK(t.echo == "where?");
    CHECK(channels_match(t));

    auto nt = fallback("take me somewhere", {Failure::Kind::NoTarget, "take me somewhere"});
    CHECK(nt.voice.find("take me somewhere") != std::string::npos);

    auto prose = fallback("q", {Failure::Kind::Repair, "  The Mona Lisa is lovely.  "});
    CHECK(prose.voice == "The Mona Lisa is lovely.");
    auto junk = fallback("q", {Failure::Kind::Repair, "{\"Response\": "});
    CHECK(junk.voice == kRetryPrompt);

    auto un = fallback("q", {Failure::Kind::Unreachable, "Mona Lisa"});
    CHECK(un.voice.find("Mona Lisa") != std::string::npos);
}

TEST_CASE("bundle JSON carries every channel key")
{
    auto j = to_json(fallback("q", {Failure::Kind::Backend, ""}));
    CHECK(j.at("schema") == kBundleSchema);
    CHECK(j.at("combo") == "C1");
    for (const char* key : {"text_window", "highlights", "virtual_screen", "minimap", "signpost"})
        CHECK(j.at(key).is_null());
    CHECK(j.at("avatar").at("pose") == "speak");
    CHECK(j.at("echo") == "q");
}

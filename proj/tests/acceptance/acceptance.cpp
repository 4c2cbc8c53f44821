// Acceptance suite: one PASS/FAIL/SKIP line per criterion, nonzero exit on
// any FAIL.
#include "support/fixtures.hpp"
#include "support/path_oracle.hpp"
#include "support/recording_backend.hpp"
#include "wander/errors.hpp"
#include "wander/session_runner.hpp"
#include "wander/transcript.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <regex>
#include <set>
#include <sstream>

using namespace wander;
using nlohmann::json;

namespace {

struct Verdict {
    enum class Status { Pass, Fail, Skip };
    Status status = Status::Fail;
    std::string detail;
};

Verdict pass(std::string d) { return {Verdict::Status::Pass, std::move(d)}; }
Verdict fail(std::string d) { return {Verdict::Status::Fail, std::move(d)}; }
Verdict skip(std::string d) { return {Verdict::Status::Skip, std::move(d)}; }

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string utter(int seq, const std::string& text)
{
    return json{{"type", "utterance"}, {"seq", seq}, {"text", text}}.dump();
}

// ---------------------------------------------------------------------------

Verdict appendix_replay()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream out;
    const auto report = replay_transcript(load_transcript(testing::fixture("appendix.json")), out);
    const double secs = seconds_since(t0);
    const auto detail = fmt::format("{}/{} turns, {:.2f} s", report.passed(), report.turns.size(), secs);
    if (report.turns.size() != 4 || !report.ok()) return fail(detail + "\n" + out.str());
    if (secs >= 5.0) return fail(detail + " (limit 5 s)");
    return pass(detail);
}

Verdict figure_combinations()
{
    std::ostringstream out;
    const auto report = replay_transcript(load_transcript(testing::fixture("figure2.json")), out);
    const auto detail = fmt::format("{}/{} utterance/context pairs", report.passed(), report.turns.size());
    if (report.turns.size() != 15 || !report.ok()) return fail(detail + "\n" + out.str());
    return pass(detail);
}

Verdict arbitration()
{
    using T = TaskKind;
    const std::vector<std::pair<TaskSet, BotId>> table = {
        {{T::InformationEnhancement}, BotId::Explorer},
        {{T::PersonalizedPreference}, BotId::Identifier},
        {{T::Navigation}, BotId::Navigator},
        {{T::InformationEnhancement, T::PersonalizedPreference}, BotId::Explorer},
        {{T::InformationEnhancement, T::Navigation}, BotId::Navigator},
        {{T::PersonalizedPreference, T::Navigation}, BotId::Navigator},
        {{T::InformationEnhancement, T::PersonalizedPreference, T::Navigation}, BotId::Navigator},
    };
    int ok = 0;
    for (const auto& [tasks, want] : table) ok += arbitrate(tasks) == want;
    const auto detail = fmt::format("{}/7 task subsets", ok);
    return ok == 7 ? pass(detail) : fail(detail);
}

// Hand-built grids with start (S) and goal (G) marked; '#' is blocked.
struct Corner {
    std::vector<std::string> rows;
};

const std::vector<Corner>& corner_cases()
{
    static const std::vector<Corner> cases = {
        {{"S"}},
        {{"SG"}},
        {{"S#G"}},
        {{"S.", ".G"}},
        {{"S#", ".G"}},
        {{"S#", "#G"}},
        {{"S.#", "#.#", "#.G"}},
        {{"S...", "###.", "G..."}},
        {{"S.....", "#####.", "......", ".#####", "G....."}},
        {{"S..#..", "...#..", "...#.G"}},
        {{"S#....", ".#.##.", ".#..#.", ".##.#.", "....#G"}},
        {{"..........", ".S......G.", ".........."}},
        {{"S.........", "..........", "..........", ".........G"}},
        {{"S.#", ".##", "..G"}},
        {{"#S#", "#.#", "#G#"}},
        {{"S#G", "#.#", "..."}},
        {{"S...#...G"}},
        {{"G", ".", ".", "S"}},
        {{"S.#.", ".#..", "#..G"}},
        {{"...#...", ".S.#.G.", "...#...", "......."}},
    };
    return cases;
}

bool compare_route(const std::vector<std::string>& rows, Cell s, Cell g, std::string& why)
{
    auto grid_rows = rows;
    for (auto& r : grid_rows)
        for (auto& c : r)
            if (c == 'S' || c == 'G') c = '.';
    const auto grid = OccupancyGrid::from_rows(grid_rows);
    const auto got = shortest_route(grid, s, g);
    const auto want = oracle::shortest_length(grid_rows, s.col, s.row, g.col, g.row);
    if (got.has_value() != want.has_value()) {
        why = fmt::format("solvability differs for ({},{})->({},{})", s.col, s.row, g.col, g.row);
        return false;
    }
    if (got && std::abs(got->length - *want) > 1e-9) {
        why = fmt::format("length {} vs oracle {}", got->length, *want);
        return false;
    }
    return true;
}

Verdict pathfinding_oracle()
{
    const auto t0 = std::chrono::steady_clock::now();
    int solvable = 0, unsolvable = 0, mismatches = 0;
    std::string first_problem;

    auto tally = [&](const std::vector<std::string>& rows, Cell s, Cell g) {
        std::string why;
        if (!compare_route(rows, s, g, why)) {
            if (first_problem.empty()) first_problem = why;
            ++mismatches;
        }
        auto clean = rows;
        for (auto& r : clean)
            for (auto& c : r)
                if (c == 'S' || c == 'G') c = '.';
        (oracle::shortest_length(clean, s.col, s.row, g.col, g.row) ? solvable : unsolvable)++;
    };

    std::mt19937 rng(20240521);
    std::uniform_real_distribution<double> density(0.1, 0.45);
    std::uniform_int_distribution<int> coord(0, 31);
    for (int i = 0; i < 200; ++i) {
        std::bernoulli_distribution wall(density(rng));
        std::vector<std::string> rows(32, std::string(32, '.'));
        for (auto& r : rows)
            for (auto& c : r) c = wall(rng) ? '#' : '.';
        const Cell s{coord(rng), coord(rng)}, g{coord(rng), coord(rng)};
        rows[s.row][s.col] = '.';
        rows[g.row][g.col] = '.';
        tally(rows, s, g);
    }
    for (const auto& cc : corner_cases()) {
        Cell s{0, 0}, g{0, 0};
        for (int r = 0; r < static_cast<int>(cc.rows.size()); ++r)
            for (int c = 0; c < static_cast<int>(cc.rows[r].size()); ++c) {
                if (cc.rows[r][c] == 'S') s = {c, r};
                if (cc.rows[r][c] == 'G') g = {c, r};
            }
        tally(cc.rows, s, g);
    }
    const double secs = seconds_since(t0);
    const auto detail = fmt::format("220 grids ({} solvable, {} unsolvable), {} mismatches, {:.3f} s", solvable,
                                    unsolvable, mismatches, secs);
    if (mismatches) return fail(detail + ": " + first_problem);
    if (secs >= 1.0) return fail(detail + " (limit 1 s)");
    return pass(detail);
}

Verdict no_clip()
{
    const auto& w = testing::museum35();
    auto backend = testing::scripted();
    VisitStats stats(w);
    Engine engine(w, &stats, backend, testing::prompts());
    const double speed = kDefaultSpeed;
    // One tick moves the guide 0.05 m.
    SessionRunner runner("noclip", engine, stats, {speed / 0.05, speed});

    std::mt19937 rng(4242);
    std::uniform_int_distribution<std::size_t> pick(0, w.artworks().size() - 1);
    int seq = 0, arrived = 0, clipped_samples = 0, late = 0;
    std::string problem;
    for (int i = 0; i < 50; ++i) {
        const Artwork* dest = nullptr;
        do dest = &w.artworks()[pick(rng)];
        while (runner.session().landmark && *runner.session().landmark == dest->id);

        const Vec2 start = runner.session().visitor_pos;
        const double length = plan_path(w, start, *dest).length;
        auto out = runner.handle(utter(++seq, "Take me to " + dest->name + "."));
        if (out.empty() || out.back().at("type") != "feedback" || out.back().at("bundle").at("combo") != "C5") {
            if (problem.empty()) problem = "no C5 feedback for " + dest->id;
            continue;
        }
        const double t0 = runner.session().clock;
        std::optional<double> arrival;
        for (int k = 0; k < 100000 && runner.walking(); ++k) {
            for (const auto& m : runner.tick()) {
                if (m.at("type") == "pose") {
                    for (const char* who : {"guide", "visitor"}) {
                        const Vec2 p{m.at(who)[0].get<double>(), m.at(who)[1].get<double>()};
                        if (!w.grid().traversable(w.grid().cell_of(p))) ++clipped_samples;
                    }
                }
                if (m.at("type") == "arrival" && m.at("artwork") == dest->id) arrival = m.at("t").get<double>() - t0;
            }
        }
        if (!arrival) {
            if (problem.empty()) problem = "no arrival at " + dest->id;
            continue;
        }
        ++arrived;
        const double lo = length / speed, hi = lo + 3.0;
        if (*arrival < lo - 1e-9 || *arrival > hi) {
            ++late;
            if (problem.empty()) problem = fmt::format("{}: arrival {:.2f} s outside [{:.2f}, {:.2f}]", dest->id, *arrival, lo, hi);
        }
    }
    const auto detail = fmt::format("{}/50 arrivals, {} samples in blocked cells, {} outside time window", arrived,
                                    clipped_samples, late);
    if (arrived != 50 || clipped_samples || late) return fail(detail + (problem.empty() ? "" : ": " + problem));
    return pass(detail);
}

// Every "painting NNN" in the bundle must be a real id.
bool ids_are_real(const json& bundle, const MuseumWorld& w, std::string& bad)
{
    static const std::regex id_re("painting \\d{3}");
    const auto text = bundle.dump();
    for (auto it = std::sregex_iterator(text.begin(), text.end(), id_re); it != std::sregex_iterator(); ++it) {
        if (!w.find_artwork(it->str()) || w.find_artwork(it->str())->id != it->str()) {
            bad = it->str();
            return false;
        }
    }
    return true;
}

Verdict robustness()
{
    const auto& w = testing::museum35();
    std::ifstream in(testing::fixture("malformed_corpus.json"));
    const auto corpus = json::parse(in).at("items");

    int repaired = 0, fallbacks = 0, crashes = 0, leaks = 0, other = 0;
    std::string problem;
    for (const auto& item : corpus) {
        const auto raw = item.at("raw").get<std::string>();
        testing::RecordingBackend backend([&](const ChatExchange& ex) -> std::string {
            if (ex.bot == "classifier") return "['information enhancement']";
            if (ex.bot == "compiler") return R"({"information": ["semantic"], "artworks": []})";
            return raw;
        });
        VisitStats stats(w);
        Engine engine(w, &stats, backend, testing::prompts());
        auto session = make_session("robust", w);
        session.visitor_pos = w.viewing_point(*w.find_artwork("painting 000"));
        session.landmark = "painting 000";
        session.history = {"painting 000"};
        try {
            const auto outcome = engine.run_turn(session, "Tell me more.");
            const auto bundle = to_json(outcome.bundle);
            std::string bad;
            if (!ids_are_real(bundle, w, bad)) {
                ++leaks;
                if (problem.empty()) problem = item.at("note").get<std::string>() + " leaked " + bad;
            }
            if (!channels_match(outcome.bundle)) ++other;
            if (!outcome.failure && outcome.response && !outcome.response->degraded) ++repaired;
            else if (outcome.bundle.combo == ComboId::C1) ++fallbacks;
            else ++other;
        } catch (const std::exception& e) {
            ++crashes;
            if (problem.empty()) problem = item.at("note").get<std::string>() + ": " + e.what();
        }
    }
    const auto detail = fmt::format("{} items: {} repaired, {} C1 fallbacks, {} crashes, {} id leaks", corpus.size(),
                                    repaired, fallbacks, crashes, leaks);
    const bool ok = corpus.size() == 20 && crashes == 0 && leaks == 0 && other == 0 && repaired >= 15 &&
                    repaired + fallbacks == 20;
    return ok ? pass(detail) : fail(detail + (problem.empty() ? "" : ": " + problem));
}

const std::vector<std::string>& session_script()
{
    static const std::vector<std::string> script = {
        "Please help me plan a tour for this museum in 30 minutes.",
        "I really like Chinese paintings.",
        "How many paintings are in this museum?",
        "Take me to visit the painting named The Birth of Venus.",
        "What are the most interesting details in this painting?",
        "Introduce this painting to me.",
        "Are there any other paintings of the similar style to this painting in this museum?",
        "I want to see the first three paintings one by one",
        "Is there any abstract painting in this museum?",
        "Guide me to see the most popular painting.",
        "Are there popular paintings I haven't visited?",
        "Summarize this tour.",
    };
    return script;
}

std::string run_script()
{
    const auto& w = testing::museum35();
    auto backend = testing::scripted();
    VisitStats stats(w);
    Engine engine(w, &stats, backend, testing::prompts());
    SessionRunner runner("det", engine, stats);
    std::string stream = runner.hello().dump() + "\n";
    int seq = 0;
    for (const auto& line : session_script()) {
        for (const auto& m : runner.handle(utter(++seq, line))) stream += m.dump() + "\n";
        for (int k = 0; k < 20000 && runner.walking(); ++k)
            for (const auto& m : runner.tick()) stream += m.dump() + "\n";
        for (int k = 0; k < 5; ++k)
            for (const auto& m : runner.tick()) stream += m.dump() + "\n";
    }
    return stream;
}

Verdict determinism()
{
    const auto a = run_script();
    const auto b = run_script();
    const auto lines = std::count(a.begin(), a.end(), '\n');
    const auto feedback = [&] {
        std::size_t n = 0;
        for (auto pos = a.find("\"type\":\"feedback\""); pos != std::string::npos;
             pos = a.find("\"type\":\"feedback\"", pos + 1))
            ++n;
        return n;
    }();
    const auto poses = a.find("\"type\":\"pose\"") != std::string::npos;
    const auto detail = fmt::format("{} messages ({} feedback) per run, {}", lines, feedback,
                                    a == b ? "byte-identical" : "runs differ");
    if (a != b || feedback != session_script().size() || !poses) return fail(detail);
    return pass(detail);
}

Verdict live_structure()
{
    const char* mode = std::getenv("WANDER_LLM_MODE");
    if (!mode || std::string(mode) != "live") return skip("set WANDER_LLM_MODE=live to run");
    const auto& w = testing::museum35();
    auto backend = backend_from_env(testing::fixture("scripted_rules.json"));
    VisitStats stats(w);
    Engine engine(w, &stats, *backend, testing::prompts());
    const auto transcript = load_transcript(testing::fixture("appendix.json"));

    int valid = 0, total = 0;
    for (int trial = 0; trial < 3; ++trial) {
        for (const auto& turn : transcript.turns) {
            ++total;
            auto session = turn.setup ? session_from_setup(*turn.setup, "live", w) : make_session("live", w);
            try {
                const auto outcome = engine.run_turn(session, turn.utterance);
                std::string bad;
                if (!outcome.failure && outcome.response && !outcome.response->degraded &&
                    ids_are_real(to_json(outcome.bundle), w, bad))
                    ++valid;
            } catch (const std::exception& e) {
                spdlog::warn("live turn failed: {}", e.what());
            }
        }
    }
    const auto detail = fmt::format("{}/{} structurally valid turns", valid, total);
    return valid * 4 >= total * 3 ? pass(detail) : fail(detail);
}

}  // namespace

int main()
{
    spdlog::set_level(spdlog::level::off);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"appendix-replay", appendix_replay},
        {"figure-combinations", figure_combinations},
        {"arbitration", arbitration},
        {"pathfinding-oracle", pathfinding_oracle},
        {"no-clip-kinematics", no_clip},
        {"robustness", robustness},
        {"determinism", determinism},
        {"live-structure", live_structure},
    };

    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = fail(std::string("threw: ") + e.what());
        }
        const char* tag = v.status == Verdict::Status::Pass ? "PASS" : v.status == Verdict::Status::Skip ? "SKIP" : "FAIL";
        failures += v.status == Verdict::Status::Fail;
        fmt::print("{}  {:<20} {}\n", tag, name, v.detail);
    }
    return failures ? 1 : 0;
}

#pragma once

#include "wander/engine.hpp"
#include "wander/nav.hpp"
#include "wander/session.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wander {

struct RunnerOptions {
    double tick_rate = 10.0;  // Hz; dt = 1 / tick_rate on the virtual clock
    double speed = kDefaultSpeed;
};

// One visitor's conversation and walk, independent of any transport. Not
// thread-safe: the owner serializes calls (the server uses a strand).
class SessionRunner {
public:
    // An utterance waiting for the engine. `generation` goes stale as soon as
    // a newer utterance is accepted.
    struct Job {
        std::uint64_t generation = 0;
        std::int64_t re = 0;
        Session snapshot;
        std::string utterance;
    };

    struct Accepted {
        std::vector<nlohmann::json> out;
        std::optional<Job> job;
    };

    SessionRunner(std::string id, const Engine& engine, VisitStats& stats, RunnerOptions options = {},
                  std::ostream* event_log = nullptr);

    nlohmann::json hello();

    // Validates an inbound message. Errors come back as `error` messages and
    // leave the session usable.
    Accepted accept(std::string_view raw);

    // Applies an engine result. A superseded job is answered with an error.
    std::vector<nlohmann::json> complete(const Job& job, const TurnOutcome& outcome);

    // The engine threw something unexpected for this job.
    std::vector<nlohmann::json> fail(const Job& job, const std::string& reason);

    // One step of the virtual clock.
    std::vector<nlohmann::json> tick();

    // accept + run_turn + complete in one call.
    std::vector<nlohmann::json> handle(std::string_view raw);

    const Session& session() const { return session_; }
    bool walking() const { return session_.walking; }
    double dt() const { return 1.0 / options_.tick_rate; }

private:
    std::int64_t next_seq() { return ++out_seq_; }
    void record(SessionEvent event);
    bool begin_leg();

    const Engine& engine_;
    VisitStats& stats_;
    RunnerOptions options_;
    std::ostream* log_;

    Session session_;
    WalkProgress progress_;
    MinimapState minimap_;
    std::deque<std::string> stops_;

    std::int64_t out_seq_ = 0;
    std::optional<std::int64_t> last_in_seq_;
    std::uint64_t generation_ = 0;
};

}  // namespace wander

#include "wander/session_runner.hpp"

#include "wander/errors.hpp"
#include "wander/protocol.hpp"
#include "wander/text.hpp"

#include <spdlog/spdlog.h>

#include <ostream>

namespace wander {

using nlohmann::json;

SessionRunner::SessionRunner(std::string id, const Engine& engine, VisitStats& stats, RunnerOptions options,
                             std::ostream* event_log)
    : engine_(engine), stats_(stats), options_(options), log_(event_log),
      session_(make_session(std::move(id), engine.world()))
{
    if (!(options_.tick_rate > 0.0) || !(options_.speed > 0.0))
        throw PreconditionError("session runner: tick rate and speed must be positive");
}

json SessionRunner::hello()
{
    return wire::hello(next_seq(), session_.id, options_.tick_rate);
}

void SessionRunner::record(SessionEvent event)
{
    apply_event(session_, event, engine_.world(), &stats_);
    if (log_) *log_ << to_json(event).dump() << '\n' << std::flush;
}

SessionRunner::Accepted SessionRunner::accept(std::string_view raw)
{
    Accepted result;
    wire::Inbound in;
    try {
        in = wire::parse_inbound(raw);
    } catch (const ParseError& e) {
        std::optional<std::int64_t> re;
        try {
            auto doc = json::parse(raw);
            if (doc.is_object() && doc.contains("seq") && doc["seq"].is_number_integer()) re = doc["seq"].get<std::int64_t>();
        } catch (const json::exception&) {
        }
        result.out.push_back(wire::error(next_seq(), re, e.what()));
        return result;
    }

    if (last_in_seq_ && in.seq <= *last_in_seq_) {
        result.out.push_back(wire::error(next_seq(), in.seq, "seq must increase"));
        return result;
    }
    last_in_seq_ = in.seq;

    std::string utterance;
    if (in.type == "select") {
        const auto* art = engine_.world().find_artwork(in.body["artwork"].get<std::string>());
        if (!art) {
            result.out.push_back(wire::error(next_seq(), in.seq, "unknown artwork"));
            return result;
        }
        utterance = "introduce " + art->name;
    } else {
        utterance = in.body["text"].get<std::string>();
    }
    if (text::is_blank(utterance)) {
        result.out.push_back(wire::error(next_seq(), in.seq, "empty utterance"));
        return result;
    }

    // Speaking again ends any walk in progress and supersedes any pending
    // request.
    stops_.clear();
    minimap_ = {};
    record({session_.clock, UtteranceEvent{utterance}});
    result.job = Job{++generation_, in.seq, session_, utterance};
    return result;
}

bool SessionRunner::begin_leg()
{
    while (!stops_.empty()) {
        const auto* dest = engine_.world().find_artwork(stops_.front());
        try {
            auto path = plan_path(engine_.world(), session_.visitor_pos, *dest);
            start_walking(session_, path.waypoints);
            progress_ = {};
            session_.guide_pos = session_.path.front();
            return true;
        } catch (const Error& e) {
            spdlog::warn("session {}: skipping stop {}: {}", session_.id, dest->id, e.what());
            stops_.pop_front();
        }
    }
    return false;
}

std::vector<json> SessionRunner::complete(const Job& job, const TurnOutcome& outcome)
{
    if (job.generation != generation_) return {wire::error(next_seq(), job.re, "superseded by a newer utterance")};

    for (const auto& ev : outcome.events) record(ev);
    if (outcome.path) {
        // Re-plan from where the visitor is now; the snapshot may be stale.
        stops_.assign(outcome.stops.begin(), outcome.stops.end());
        minimap_ = {};
        if (!begin_leg()) stop_walking(session_);
    }
    return {wire::feedback(next_seq(), job.re, outcome.bundle)};
}

std::vector<json> SessionRunner::fail(const Job& job, const std::string& reason)
{
    spdlog::error("session {}: turn failed: {}", session_.id, reason);
    return {wire::error(next_seq(), job.re, reason)};
}

std::vector<json> SessionRunner::tick()
{
    const double dt = 1.0 / options_.tick_rate;
    session_.clock += dt;
    if (!session_.walking) return {};

    std::vector<json> out;
    const bool arrived = advance(session_, progress_, dt, options_.speed);
    minimap_ = minimap(engine_.world(), session_, minimap_);
    std::optional<SignpostState> sign;
    if (session_.visitor_pos != session_.path.back()) sign = signpost(session_.visitor_pos, session_.path.back());
    out.push_back(wire::pose(next_seq(), session_.clock, session_.guide_pos, session_.visitor_pos, minimap_, sign));

    if (arrived) {
        const auto stop = stops_.empty() ? std::string() : stops_.front();
        if (!stops_.empty()) stops_.pop_front();
        if (!stop.empty()) {
            record({session_.clock, ArrivalEvent{stop, session_.visitor_pos, session_.guide_pos}});
            out.push_back(wire::arrival(next_seq(), session_.clock, stop));
        } else {
            stop_walking(session_);
        }
        minimap_ = minimap(engine_.world(), session_, minimap_);
        begin_leg();
    }
    return out;
}

std::vector<json> SessionRunner::handle(std::string_view raw)
{
    auto accepted = accept(raw);
    auto out = std::move(accepted.out);
    if (accepted.job) {
        auto more = complete(*accepted.job, engine_.run_turn(accepted.job->snapshot, accepted.job->utterance));
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

}  // namespace wander

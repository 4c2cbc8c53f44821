#include "wander/engine.hpp"

#include "wander/errors.hpp"

#include <spdlog/spdlog.h>

namespace wander {

Engine::Engine(const MuseumWorld& world, const VisitStats* stats, ChatBackend& backend, const PromptSet& prompts,
               ComposeOptions options)
    : world_(world), stats_(stats), backend_(backend), prompts_(prompts), options_(options)
{
}

namespace {

Failure describe(const GatewayFailure& e)
{
    if (dynamic_cast<const BackendTimeout*>(&e)) return {Failure::Kind::Timeout, e.what()};
    return {Failure::Kind::Backend, e.what()};
}

}  // namespace

TurnOutcome Engine::run_turn(const Session& snapshot, std::string_view utterance) const
{
    TurnOutcome out;
    out.utterance = std::string(utterance);
    Session work = snapshot;

    auto fail = [&](Failure f) {
        spdlog::warn("session {}: turn '{}' degraded: {}", snapshot.id, utterance, f.detail);
        out.bundle = fallback(utterance, f);
        out.failure = std::move(f);
        out.stops.clear();
        out.path.reset();
        out.events.push_back({snapshot.clock, FeedbackEvent{std::string(to_string(out.bundle.combo)), out.bundle.voice,
                                                            std::nullopt}});
        return out;
    };

    PipelineContext ctx{world_, stats_, backend_, prompts_};
    try {
        out.frame = identify_context(utterance, work, ctx);
    } catch (const GatewayFailure& e) {
        return fail(describe(e));
    }

    const BotId bot = arbitrate(out.frame->tasks);
    out.bot = bot;
    BotResponse resp;
    try {
        switch (bot) {
        case BotId::Explorer:
            resp = run_explorer(*out.frame, work, world_, backend_, prompts_.explorer);
            break;
        case BotId::Navigator:
            resp = run_navigator(*out.frame, work, world_, backend_, prompts_.navigator);
            break;
        case BotId::Identifier:
            resp = run_identifier(*out.frame, work, backend_, prompts_.identifier);
            out.events.push_back({snapshot.clock, PreferenceEvent{std::string(utterance)}});
            break;
        }
    } catch (const GatewayFailure& e) {
        return fail(describe(e));
    } catch (const NoResolvableTarget& e) {
        return fail({Failure::Kind::NoTarget, e.request()});
    }
    out.response = resp;
    if (resp.degraded) return fail({Failure::Kind::Repair, resp.response});

    if (bot == BotId::Navigator) {
        out.stops = *resp.tours;
        const auto* dest = world_.find_artwork(out.stops.front());
        try {
            out.path = plan_path(world_, work.visitor_pos, *dest);
        } catch (const Unreachable&) {
            return fail({Failure::Kind::Unreachable, dest->name});
        } catch (const PreconditionError&) {
            return fail({Failure::Kind::Unreachable, dest->name});
        }
        start_walking(work, out.path->waypoints);
    }

    out.bundle = compose(*out.frame, bot, resp, work, world_, options_);

    std::optional<std::vector<std::string>> planned;
    if (resp.tours && resp.tours->size() >= 2) planned = *resp.tours;
    out.events.push_back(
        {snapshot.clock, FeedbackEvent{std::string(to_string(out.bundle.combo)), out.bundle.voice, planned}});
    return out;
}

}  // namespace wander

#include "wander/protocol.hpp"

#include "wander/errors.hpp"

namespace wander::wire {

using nlohmann::json;

Inbound parse_inbound(std::string_view raw)
{
    json doc;
    try {
        doc = json::parse(raw);
    } catch (const json::parse_error&) {
        throw ParseError("malformed JSON");
    }
    if (!doc.is_object()) throw ParseError("message must be a JSON object");
    if (!doc.contains("type") || !doc["type"].is_string()) throw ParseError("missing string field 'type'");
    if (!doc.contains("seq") || !doc["seq"].is_number_integer()) throw ParseError("missing integer field 'seq'");

    Inbound in;
    in.type = doc["type"].get<std::string>();
    in.seq = doc["seq"].get<std::int64_t>();
    if (in.type == "utterance") {
        if (!doc.contains("text") || !doc["text"].is_string()) throw ParseError("utterance needs string field 'text'");
    } else if (in.type == "select") {
        if (!doc.contains("artwork") || !doc["artwork"].is_string())
            throw ParseError("select needs string field 'artwork'");
    } else {
        throw ParseError("unsupported message type '" + in.type + "'");
    }
    in.body = std::move(doc);
    return in;
}

json hello(std::int64_t seq, const std::string& session_id, double tick_rate)
{
    return {{"type", "hello"},  {"seq", seq}, {"session", session_id}, {"protocol", kProtocolVersion},
            {"museum", "/museum"}, {"tick_rate", tick_rate}};
}

json feedback(std::int64_t seq, std::int64_t re, const FeedbackBundle& bundle)
{
    return {{"type", "feedback"}, {"seq", seq}, {"re", re}, {"bundle", to_json(bundle)}};
}

json pose(std::int64_t seq, double t, Vec2 guide, Vec2 visitor, const MinimapState& map,
          const std::optional<SignpostState>& sign)
{
    return {{"type", "pose"},
            {"seq", seq},
            {"t", t},
            {"guide", {guide.x, guide.y}},
            {"visitor", {visitor.x, visitor.y}},
            {"minimap", to_json(map)},
            {"signpost", sign ? to_json(*sign) : json(nullptr)}};
}

json arrival(std::int64_t seq, double t, const std::string& artwork)
{
    return {{"type", "arrival"}, {"seq", seq}, {"t", t}, {"artwork", artwork}};
}

json error(std::int64_t seq, std::optional<std::int64_t> re, const std::string& reason)
{
    return {{"type", "error"}, {"seq", seq}, {"re", re ? json(*re) : json(nullptr)}, {"reason", reason}};
}

}  // namespace wander::wire

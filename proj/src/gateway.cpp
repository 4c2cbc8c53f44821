#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "wander/gateway.hpp"

#include "wander/errors.hpp"
#include "wander/text.hpp"

#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <thread>

namespace wander {

using nlohmann::json;

// ---------------------------------------------------------------------------
// ScriptedBackend

ScriptedBackend::ScriptedBackend(std::vector<Rule> rules) : rules_(std::move(rules))
{
    for (const auto& r : rules_) {
        lowered_.push_back(text::ascii_lower(r.match));
        try {
            compiled_.emplace_back(r.regex ? r.match : std::string{}, std::regex::icase | std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw ParseError("scripted rule: bad regex '" + r.match + "': " + e.what());
        }
    }
}

ScriptedBackend ScriptedBackend::from_json(const json& doc)
{
    const json& list = doc.is_object() ? doc.at("rules") : doc;
    if (!list.is_array()) throw ParseError("scripted rules must be a JSON list");
    std::vector<Rule> rules;
    for (const auto& r : list) {
        try {
            Rule rule;
            rule.bot = r.value("bot", "");
            rule.match = r.at("match").get<std::string>();
            rule.regex = r.value("regex", false);
            const auto& resp = r.at("response");
            // Structured responses are stored as their compact JSON text.
            rule.response = resp.is_string() ? resp.get<std::string>() : resp.dump();
            rules.push_back(std::move(rule));
        } catch (const json::exception& e) {
            throw ParseError(std::string("scripted rule: ") + e.what());
        }
    }
    return ScriptedBackend(std::move(rules));
}

ScriptedBackend ScriptedBackend::from_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read scripted rules " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return from_json(doc);
}

std::string ScriptedBackend::complete(const ChatExchange& exchange)
{
    if (exchange.turns.empty()) throw PreconditionError("chat exchange has no turns");
    const std::string& probe = exchange.turns.back().second;
    const std::string lowered = text::ascii_lower(probe);
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const auto& r = rules_[i];
        if (!r.bot.empty() && r.bot != exchange.bot) continue;
        bool hit = r.regex ? std::regex_search(probe, compiled_[i]) : lowered.find(lowered_[i]) != std::string::npos;
        if (hit) return r.response;
    }
    throw BackendError(404, "no scripted rule matched for bot '" + exchange.bot + "'");
}

// ---------------------------------------------------------------------------
// LiveBackend

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path without trailing slash
};

SplitUrl split_url(const std::string& url)
{
    auto scheme_end = url.find("://");
    auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) return {url, ""};
    std::string prefix = url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {url.substr(0, path_start), prefix};
}

bool is_timeout(httplib::Error e)
{
    return e == httplib::Error::Read || e == httplib::Error::ConnectionTimeout || e == httplib::Error::Write;
}

}  // namespace

LiveBackend::LiveBackend(LiveConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper))
{
    if (config_.base_url.empty()) throw PreconditionError("live backend needs a base URL");
    if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

json LiveBackend::request_body(const ChatExchange& exchange) const
{
    json messages = json::array();
    if (!exchange.system.empty()) messages.push_back({{"role", "system"}, {"content", exchange.system}});
    for (const auto& [role, content] : exchange.turns) messages.push_back({{"role", role}, {"content", content}});
    json body = {
        {"model", config_.model},
        {"messages", std::move(messages)},
        {"temperature", exchange.temperature},
        {"max_tokens", exchange.max_tokens},
    };
    if (exchange.want_json) body["response_format"] = {{"type", "json_object"}};
    return body;
}

std::string LiveBackend::complete(const ChatExchange& exchange)
{
    if (exchange.turns.empty()) throw PreconditionError("chat exchange has no turns");

    const auto url = split_url(config_.base_url);
    const auto body = request_body(exchange).dump();
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.retry.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.retry.timeout - seconds);

    bool last_was_timeout = false;
    int last_status = 0;
    std::string last_error;
    for (int attempt = 0; attempt <= config_.retry.retries; ++attempt) {
        if (attempt > 0) {
            const auto& b = config_.retry.backoff;
            if (!b.empty()) sleeper_(b[std::min<std::size_t>(attempt - 1, b.size() - 1)]);
        }
        ++attempts_;

        httplib::Client client(url.origin);
        client.set_connection_timeout(seconds.count(), micros.count());
        client.set_read_timeout(seconds.count(), micros.count());
        client.set_write_timeout(seconds.count(), micros.count());
        httplib::Headers headers;
        if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

        auto res = client.Post(url.prefix + "/chat/completions", headers, body, "application/json");
        if (!res) {
            last_was_timeout = is_timeout(res.error());
            last_status = 0;
            last_error = httplib::to_string(res.error());
            spdlog::warn("chat backend attempt {} failed: {}", attempt + 1, last_error);
            continue;
        }
        last_was_timeout = false;
        last_status = res->status;
        if (res->status == 429 || res->status >= 500) {
            last_error = res->body;
            spdlog::warn("chat backend attempt {} returned {}", attempt + 1, res->status);
            continue;
        }
        if (res->status != 200) throw BackendError(res->status, res->body);

        auto doc = json::parse(res->body, nullptr, false);
        if (doc.is_discarded()) throw BackendError(res->status, "response is not JSON");
        try {
            return doc.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception&) {
            throw BackendError(res->status, "response has no choices[0].message.content");
        }
    }
    if (last_was_timeout) throw BackendTimeout();
    throw BackendError(last_status, last_error);
}

// ---------------------------------------------------------------------------

std::unique_ptr<ChatBackend> backend_from_env(const std::filesystem::path& scripted_rules)
{
    auto env = [](const char* key) {
        const char* v = std::getenv(key);
        return v ? std::string(v) : std::string{};
    };
    const auto mode = env("WANDER_LLM_MODE");
    if (mode.empty() || mode == "scripted")
        return std::make_unique<ScriptedBackend>(ScriptedBackend::from_file(scripted_rules));
    if (mode != "live") throw PreconditionError("WANDER_LLM_MODE must be 'live' or 'scripted'");
    LiveConfig cfg;
    cfg.base_url = env("WANDER_LLM_BASE_URL");
    cfg.model = env("WANDER_LLM_MODEL");
    cfg.api_key = env("WANDER_LLM_API_KEY");
    if (cfg.base_url.empty()) cfg.base_url = "https://api.openai.com/v1";
    if (cfg.model.empty()) cfg.model = "gpt-3.5-turbo";
    return std::make_unique<LiveBackend>(std::move(cfg));
}

}  // namespace wander

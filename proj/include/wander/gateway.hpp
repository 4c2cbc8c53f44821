#pragma once

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <regex>
#include <string>
#include <utility>
#include <vector>

namespace wander {

inline constexpr double kClassifierTemperature = 0.2;
inline constexpr double kBotTemperature = 0.7;

struct ChatExchange {
    std::string bot;  // which bot is asking; lets scripted rules target one bot
    std::string system;
    std::vector<std::pair<std::string, std::string>> turns;  // (role, text)
    double temperature = kClassifierTemperature;
    int max_tokens = 512;
    bool want_json = true;
};

// Stateless chat-completion backend. Implementations must be callable from
// several session loops at once.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    // Raw model text. Throws BackendTimeout / BackendError.
    virtual std::string complete(const ChatExchange& exchange) = 0;
    virtual std::string name() const = 0;
};

// Deterministic rule table standing in for a model. The first rule whose
// `bot` (empty = any) and `match` fit the last user turn wins. `match` is a
// case-insensitive substring unless the rule sets "regex": true.
class ScriptedBackend final : public ChatBackend {
public:
    struct Rule {
        std::string bot;
        std::string match;
        bool regex = false;
        std::string response;
    };

    explicit ScriptedBackend(std::vector<Rule> rules);
    static ScriptedBackend from_json(const nlohmann::json& rules);
    static ScriptedBackend from_file(const std::filesystem::path& path);

    std::string complete(const ChatExchange& exchange) override;
    std::string name() const override { return "scripted"; }

    const std::vector<Rule>& rules() const { return rules_; }

private:
    std::vector<Rule> rules_;
    std::vector<std::regex> compiled_;
    std::vector<std::string> lowered_;
};

struct RetryPolicy {
    std::chrono::milliseconds timeout{20000};
    int retries = 2;
    std::vector<std::chrono::milliseconds> backoff{std::chrono::milliseconds(1000),
                                                   std::chrono::milliseconds(4000)};
};

struct LiveConfig {
    std::string base_url;  // e.g. https://api.openai.com/v1
    std::string model;
    std::string api_key;
    RetryPolicy retry;
};

// OpenAI-style POST {base_url}/chat/completions.
class LiveBackend final : public ChatBackend {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    explicit LiveBackend(LiveConfig config, Sleeper sleeper = {});

    std::string complete(const ChatExchange& exchange) override;
    std::string name() const override { return "live"; }

    // Total HTTP attempts made so far.
    int attempts() const { return attempts_.load(); }

    nlohmann::json request_body(const ChatExchange& exchange) const;

private:
    LiveConfig config_;
    Sleeper sleeper_;
    std::atomic<int> attempts_{0};
};

// WANDER_LLM_MODE selects the backend ("scripted" by default). Live mode
// reads WANDER_LLM_BASE_URL, WANDER_LLM_MODEL and WANDER_LLM_API_KEY.
std::unique_ptr<ChatBackend> backend_from_env(const std::filesystem::path& scripted_rules);

}  // namespace wander
